#include "mfx/continuity.hpp"

#include <cctype>
#include <optional>

namespace mfx {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Lam: return "Lam";
    case Rule::Bind: return "Bind";
    case Rule::Const: return "Const";
    case Rule::Rec: return "Rec";
    case Rule::If: return "If";
    case Rule::Case: return "Case";
  }
  return "?";
}

std::string ContinuityFailure::path_string() const {
  std::string out;
  for (const auto& seg : path) {
    if (!out.empty()) out += ".";
    out += seg;
  }
  return out;
}

namespace {

// Path from `t` to the first pure-position reference to `fun`.
std::optional<std::vector<std::string>> locate(const Term& t, std::string_view fun) {
  if (!mentions_function(t, fun)) return std::nullopt;
  std::vector<std::string> path;
  const Term* cur = &t;
  while (true) {
    auto pick = [&](const std::vector<TermPtr>& args) -> bool {
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (mentions_function(*args[i], fun)) {
          path.push_back("arg" + std::to_string(i));
          cur = args[i].get();
          return true;
        }
      }
      return false;
    };
    if (const auto* c = cur->as<Term::Call>()) {
      if (c->fun == fun || !pick(c->args)) return path;
    } else if (const auto* k = cur->as<Term::Ctor>()) {
      if (!pick(k->args)) return path;
    } else if (const auto* b = cur->as<Term::Binary>()) {
      bool left = mentions_function(*b->lhs, fun);
      path.push_back(left ? "lhs" : "rhs");
      cur = left ? b->lhs.get() : b->rhs.get();
    } else if (const auto* n = cur->as<Term::Not>()) {
      path.push_back("arg");
      cur = n->arg.get();
    } else if (const auto* tu = cur->as<Term::Tuple>()) {
      if (!pick(tu->elems)) return path;
    } else {
      return path;
    }
  }
}

class Checker {
 public:
  explicit Checker(std::string_view fun) : fun_(fun) {}

  std::optional<ContinuityFailure> failure;

  std::optional<Derivation> check(const ExprPtr& e, std::vector<std::string>& path) {
    if (!mentions_function(*e, fun_)) return Derivation{Rule::Const, e, {}};

    if (const auto* b = e->as<Expr::Bind>()) {
      auto first = sub(b->bound, path, "bind");
      if (!first) return std::nullopt;
      auto rest = sub(b->body, path, "cont");
      if (!rest) return std::nullopt;
      return Derivation{Rule::Bind, e, {std::move(*first), std::move(*rest)}};
    }
    if (const auto* i = e->as<Expr::If>()) {
      if (!pure_ok(*i->cond, path, "cond")) return std::nullopt;
      auto a = sub(i->then_branch, path, "then");
      if (!a) return std::nullopt;
      auto b = sub(i->else_branch, path, "else");
      if (!b) return std::nullopt;
      return Derivation{Rule::If, e, {std::move(*a), std::move(*b)}};
    }
    if (const auto* c = e->as<Expr::Case>()) {
      if (!pure_ok(*c->scrutinee, path, "scrutinee")) return std::nullopt;
      Derivation d{Rule::Case, e, {}};
      for (std::size_t k = 0; k < c->branches.size(); ++k) {
        auto br = sub(c->branches[k].body, path, "branch" + std::to_string(k));
        if (!br) return std::nullopt;
        d.children.push_back(std::move(*br));
      }
      return d;
    }
    if (const auto* s = e->as<Expr::SelfCall>()) {
      if (!args_ok(s->args, path)) return std::nullopt;
      return Derivation{Rule::Rec, e, {}};
    }
    if (const auto* x = e->as<Expr::ExtCall>()) {
      args_ok(x->args, path);
      return std::nullopt;
    }
    if (const auto* r = e->as<Expr::Return>()) {
      pure_ok(*r->value, path, "ret");
    } else if (const auto* n = e->as<Expr::RefNew>()) {
      pure_ok(*n->value, path, "value");
    } else if (const auto* g = e->as<Expr::RefGet>()) {
      pure_ok(*g->ref, path, "ref");
    } else if (const auto* st = e->as<Expr::RefSet>()) {
      if (pure_ok(*st->ref, path, "ref")) pure_ok(*st->value, path, "value");
    }
    return std::nullopt;
  }

 private:
  std::optional<Derivation> sub(const ExprPtr& e, std::vector<std::string>& path,
                                const std::string& seg) {
    path.push_back(seg);
    auto d = check(e, path);
    path.pop_back();
    return d;
  }

  bool pure_ok(const Term& t, std::vector<std::string>& path, const std::string& seg) {
    auto where = locate(t, fun_);
    if (!where) return true;
    std::vector<std::string> full = path;
    full.push_back(seg);
    full.insert(full.end(), where->begin(), where->end());
    failure = ContinuityFailure{
        std::move(full),
        "recursive call to '" + std::string(fun_) + "' inside a pure expression"};
    return false;
  }

  bool args_ok(const std::vector<TermPtr>& args, std::vector<std::string>& path) {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!pure_ok(*args[i], path, "arg" + std::to_string(i))) return false;
    }
    return true;
  }

  std::string_view fun_;
};

void explain_rec(const Derivation& d, std::string_view self, int depth, std::string& out) {
  out += std::string(2 * depth, ' ') + "(" + std::string(to_string(d.rule)) + ") ";
  out += pretty(*d.subject, self) + "\n";
  for (const auto& c : d.children) explain_rec(c, self, depth + 1, out);
}

void preorder_rec(const Derivation& d, std::vector<Rule>& out) {
  out.push_back(d.rule);
  for (const auto& c : d.children) preorder_rec(c, out);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ContinuityResult check_continuous(const FunDef& f) {
  Checker checker(f.name);
  std::vector<std::string> path{"body"};
  auto body = checker.check(f.body, path);
  if (!body) {
    if (checker.failure) return *checker.failure;
    return ContinuityFailure{{"body"}, "unsupported recursion"};
  }
  return Derivation{Rule::Lam, f.body, {std::move(*body)}};
}

std::string explain(const Derivation& d, std::string_view self_name) {
  std::string out;
  explain_rec(d, self_name, 0, out);
  return out;
}

std::vector<Rule> preorder(const Derivation& d) {
  std::vector<Rule> out;
  preorder_rec(d, out);
  return out;
}

std::string shape(const Derivation& d) {
  std::string out = upper(to_string(d.rule));
  if (d.children.empty()) return out;
  if (d.children.size() == 1) return out + "▸" + shape(d.children[0]);
  out += "▸[";
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    if (i) out += ", ";
    out += shape(d.children[i]);
  }
  return out + "]";
}

}  // namespace mfx
