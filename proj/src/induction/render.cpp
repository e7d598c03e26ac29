#include <sstream>

#include "induction/terms.hpp"

namespace mfx {

namespace {

enum Level { kTop = 0, kImplies = 1, kOr, kAnd, kNot, kCmp, kCons, kAdd, kMul, kApp, kAtom };

std::string wrap(const std::string& s, Level have, Level need) {
  return have < need ? "(" + s + ")" : s;
}

std::string render(const Term& t, Level need);

bool proper_list(const Term& t, std::vector<const Term*>& elems) {
  const Term* cur = &t;
  while (const auto* c = cur->as<Term::Ctor>()) {
    if (c->name == "[]") return true;
    if (c->name != "#") return false;
    elems.push_back(c->args[0].get());
    cur = c->args[1].get();
  }
  return false;
}

std::string application(const std::string& head, const std::vector<TermPtr>& args, Level need) {
  if (args.empty()) return head;
  std::string out = head;
  for (const auto& a : args) out += " " + render(*a, kAtom);
  return wrap(out, kApp, need);
}

std::string render(const Term& t, Level need) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, Term::NatLit>) {
          return n.value.str();
        } else if constexpr (std::is_same_v<N, Term::BoolLit>) {
          return n.value ? "True" : "False";
        } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
          return "()";
        } else if constexpr (std::is_same_v<N, Term::RefLit>) {
          return "ref" + std::to_string(n.id);
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          if (n.name == "#") {
            std::vector<const Term*> elems;
            if (proper_list(t, elems)) {
              std::string out = "[";
              for (std::size_t i = 0; i < elems.size(); ++i) {
                if (i) out += ", ";
                out += render(*elems[i], kTop);
              }
              return out + "]";
            }
            return wrap(render(*n.args[0], kAdd) + " # " + render(*n.args[1], kCons), kCons,
                        need);
          }
          return application(n.name, n.args, need);
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return application(n.fun, n.args, need);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          switch (n.op) {
            case BinOp::Eq:
            case BinOp::Ne:
            case BinOp::Lt: {
              const char* sym = n.op == BinOp::Eq ? " = " : n.op == BinOp::Ne ? " ≠ " : " < ";
              return wrap(render(*n.lhs, kCons) + sym + render(*n.rhs, kCons), kCmp, need);
            }
            case BinOp::And:
              return wrap(render(*n.lhs, kNot) + " ∧ " + render(*n.rhs, kAnd), kAnd, need);
            case BinOp::Or:
              return wrap(render(*n.lhs, kAnd) + " ∨ " + render(*n.rhs, kOr), kOr, need);
            case BinOp::Implies:
              return wrap(render(*n.lhs, kOr) + " ⟶ " + render(*n.rhs, kImplies), kImplies,
                          need);
            case BinOp::Add:
            case BinOp::Sub: {
              const char* sym = n.op == BinOp::Add ? " + " : " - ";
              return wrap(render(*n.lhs, kAdd) + sym + render(*n.rhs, kMul), kAdd, need);
            }
            case BinOp::Div:
            case BinOp::Mod: {
              const char* sym = n.op == BinOp::Div ? " div " : " mod ";
              return wrap(render(*n.lhs, kMul) + sym + render(*n.rhs, kApp), kMul, need);
            }
          }
          return "?";
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          if (const auto* b = n.arg->template as<Term::Binary>(); b && b->op == BinOp::Eq) {
            return wrap(render(*b->lhs, kCons) + " ≠ " + render(*b->rhs, kCons), kCmp, need);
          }
          return wrap("¬ " + render(*n.arg, kNot), kNot, need);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          std::string out = "(";
          for (std::size_t i = 0; i < n.elems.size(); ++i) {
            if (i) out += ", ";
            out += render(*n.elems[i], kTop);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          return wrap(render(*n.arg, kCons) + " matches " + render(*n.pattern, kCons), kCmp,
                      need);
        }
      },
      t.node);
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string join_vars(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += " ";
    out += n;
  }
  return out;
}

}  // namespace

std::string render_logic(const Term& t) { return render(t, kTop); }

std::string render_premise(const Premise& p, const InductionRule& rule) {
  auto side = [](const TermPtr& t) { return render(*t, kCons); };
  switch (p.kind) {
    case Premise::Kind::Eq:
    case Premise::Kind::HeapGet:
    case Premise::Kind::HeapEq:
    case Premise::Kind::OptEq:
      return side(p.lhs) + " = " + side(p.rhs);
    case Premise::Kind::Cond:
    case Premise::Kind::Hyp:
      return render(*p.term, kTop);
    case Premise::Kind::Sem:
      return render(*p.lhs, kAtom) + " ∈ ⟦" + render(*p.rhs, kTop) + "⟧";
    case Premise::Kind::GeneralHyp: {
      std::string inner = rule.monad == Monad::Heap
                              ? render(*p.rhs, kAtom) + " ∈ ⟦" + render(*p.lhs, kTop) + "⟧"
                              : side(p.lhs) + " = " + side(p.rhs);
      return "(⋀" + join_vars(p.binders) + ". " + inner + " ⟹ " + render(*p.term, kTop) + ")";
    }
    case Premise::Kind::Body: {
      std::string body = pretty(*p.body, rule.function);
      if (rule.monad == Monad::Heap) return render(*p.rhs, kAtom) + " ∈ ⟦" + body + "⟧";
      return "(" + body + ") = " + side(p.rhs);
    }
  }
  return "?";
}

std::string render_obligation(const Obligation& o, const InductionRule& rule) {
  std::string out;
  if (!o.vars.empty()) {
    std::vector<std::string> names;
    for (const auto& v : o.vars) names.push_back(v.name);
    out = "⋀" + join_vars(names) + ". ";
  }
  for (const auto& p : o.premises) out += render_premise(p, rule) + " ⟹ ";
  return out + render(*o.conclusion, kTop);
}

std::string render_text(const InductionRule& rule) {
  std::vector<std::string> lines;
  for (const auto& o : rule.obligations) lines.push_back(render_obligation(o, rule));
  std::string schema =
      render_premise(rule.schema_premise, rule) + " ⟹ " + render(*rule.schema_conclusion, kTop);
  std::size_t width = display_width(schema);
  for (const auto& l : lines) width = std::max(width, display_width(l));

  std::ostringstream out;
  for (const auto& l : lines) out << l << "\n";
  std::string bar;
  for (std::size_t i = 0; i < width; ++i) bar += "─";
  out << bar << "\n" << schema << "\n";
  return out.str();
}

}  // namespace mfx
