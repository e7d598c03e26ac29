#include <sstream>

#include "mfx/syntax.hpp"

namespace mfx {
namespace {

// Binding strength, loosest first. Mirrors the parser's precedence climb.
enum Level {
  kImplies = 1,
  kOr,
  kAnd,
  kNot,
  kCmp,
  kCons,
  kAdd,
  kMul,
  kApp,
  kAtom,
};

int level_of(BinOp op) {
  switch (op) {
    case BinOp::Implies: return kImplies;
    case BinOp::Or: return kOr;
    case BinOp::And: return kAnd;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt: return kCmp;
    case BinOp::Add:
    case BinOp::Sub: return kAdd;
    case BinOp::Div:
    case BinOp::Mod: return kMul;
  }
  return kAtom;
}

bool is_anonymous(const std::string& name) { return name.size() > 1 && name[0] == '_'; }

// Collects the elements of a list literal; false if the spine does not end in [].
bool list_elems(const Term& t, std::vector<TermPtr>& out) {
  const Term* cur = &t;
  while (true) {
    const auto* c = cur->as<Term::Ctor>();
    if (!c) return false;
    if (c->name == "[]") return true;
    if (c->name != "#") return false;
    out.push_back(c->args[0]);
    cur = c->args[1].get();
  }
}

std::string print(const Term& t, int ctx);

std::string wrap(std::string s, int own, int ctx) {
  return own < ctx ? "(" + s + ")" : s;
}

std::string print_args(const std::vector<TermPtr>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print(*args[i], kImplies);
  }
  return out + ")";
}

std::string print(const Term& t, int ctx) {
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
          if (n.args.empty()) return n.name;
          std::vector<TermPtr> elems;
          if (list_elems(t, elems)) {
            std::string out = "[";
            for (std::size_t i = 0; i < elems.size(); ++i) {
              if (i) out += ", ";
              out += print(*elems[i], kImplies);
            }
            return out + "]";
          }
          if (n.name == "#") {
            return wrap(print(*n.args[0], kAdd) + " # " + print(*n.args[1], kCons), kCons, ctx);
          }
          std::string out = n.name;
          for (const auto& a : n.args) out += " " + print(*a, kAtom);
          return wrap(out, kApp, ctx);
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return n.fun + print_args(n.args);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          int own = level_of(n.op);
          int l = own, r = own;
          if (n.op == BinOp::Implies) {
            l = own + 1;
          } else if (own == kCmp) {
            l = r = kCons;
          } else {
            r = own + 1;
          }
          std::string op(to_string(n.op));
          return wrap(print(*n.lhs, l) + " " + op + " " + print(*n.rhs, r), own, ctx);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return wrap("¬ " + print(*n.arg, kNot), kNot, ctx);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          std::string out = "(";
          for (std::size_t i = 0; i < n.elems.size(); ++i) {
            if (i) out += ", ";
            out += print(*n.elems[i], kImplies);
          }
          return out + ")";
        } else {
          return wrap(print(*n.arg, kCons) + " matches " + print(*n.pattern, kApp), kCmp, ctx);
        }
      },
      t.node);
}

// True if the printed form of `e` ends in a case whose last branch would
// swallow a following `| pattern ⇒ ...`.
bool ends_with_case(const Expr& e) {
  if (e.as<Expr::Case>()) return true;
  if (const auto* i = e.as<Expr::If>()) return ends_with_case(*i->else_branch);
  return false;
}

class ExprPrinter {
 public:
  explicit ExprPrinter(std::string_view self) : self_(self) {}

  std::string print(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Expr::Return>) {
            return "return " + mfx::print(*n.value, kImplies);
          } else if constexpr (std::is_same_v<N, Expr::Bind>) {
            std::string out = "do ";
            const Expr* cur = &e;
            while (const auto* b = cur->as<Expr::Bind>()) {
              if (!is_anonymous(b->var)) out += b->var + " ← ";
              out += print(*b->bound) + "; ";
              cur = b->body.get();
            }
            return out + print(*cur) + " done";
          } else if constexpr (std::is_same_v<N, Expr::If>) {
            return "if " + mfx::print(*n.cond, kImplies) + " then " + print(*n.then_branch) +
                   " else " + print(*n.else_branch);
          } else if constexpr (std::is_same_v<N, Expr::Case>) {
            std::string out = "case " + mfx::print(*n.scrutinee, kImplies) + " of ";
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
              const auto& br = n.branches[i];
              if (i) out += " | ";
              out += pattern(br) + " ⇒ ";
              std::string body = print(*br.body);
              bool last = i + 1 == n.branches.size();
              out += (!last && ends_with_case(*br.body)) ? "(" + body + ")" : body;
            }
            return out;
          } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
            return std::string(self_) + print_args(n.args);
          } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
            return n.fun + print_args(n.args);
          } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
            return "ref " + mfx::print(*n.value, kImplies);
          } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
            return "!" + mfx::print(*n.ref, kAtom);
          } else {
            return mfx::print(*n.ref, kImplies) + " := " + mfx::print(*n.value, kImplies);
          }
        },
        e.node);
  }

 private:
  static std::string binder(const std::string& v) { return is_anonymous(v) ? "_" : v; }

  static std::string pattern(const CaseBranch& br) {
    if (br.ctor == "#") return binder(br.vars[0]) + " # " + binder(br.vars[1]);
    std::string out = br.ctor;
    for (const auto& v : br.vars) out += " " + binder(v);
    return out;
  }

  std::string_view self_;
};

std::string field_type(const Type& t) {
  std::string s = to_string(t);
  return t.kind == Type::Kind::Con && !t.args.empty() ? "(" + s + ")" : s;
}

std::string params(const std::vector<Param>& ps) {
  std::string out = "(";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].name + " : " + to_string(ps[i].type);
  }
  return out + ")";
}

}  // namespace

std::string pretty(const Term& t) { return print(t, kImplies); }

std::string pretty(const Expr& e, std::string_view self_name) {
  return ExprPrinter(self_name).print(e);
}

std::string pretty(const Program& p) {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << "\n";
    first = false;
  };
  for (const auto& d : p.data_decls) {
    sep();
    out << "datatype " << d.name;
    for (const auto& tp : d.type_params) out << " " << tp;
    out << " =";
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      out << (i ? " | " : " ") << d.constructors[i].name;
      for (const auto& f : d.constructors[i].fields) out << " " << field_type(f);
    }
    out << "\n";
  }
  // Pure helpers may be used by functions, so they come first; the parser
  // only requires definition before use.
  for (const auto& f : p.pure_defs) {
    sep();
    out << "fun " << f.name << params(f.params) << " : " << to_string(f.result_type)
        << " =\n  " << pretty(*f.body) << "\n";
  }
  for (const auto& f : p.fun_defs) {
    sep();
    out << to_string(f.monad) << " fun " << f.name << params(f.params) << " : "
        << to_string(f.result_type) << " =\n  " << pretty(*f.body, f.name) << "\n";
  }
  return out.str();
}

}  // namespace mfx
