#include <map>

#include "mfx/syntax.hpp"

namespace mfx {

std::string_view to_string(Monad m) { return m == Monad::Option ? "option" : "heap"; }

Type Type::con(std::string name, std::vector<Type> args) {
  Type t;
  t.kind = Kind::Con;
  t.name = std::move(name);
  t.args = std::move(args);
  return t;
}

Type Type::var(std::string name) {
  Type t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

std::string to_string(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Var:
      return t.name;
    case Type::Kind::Meta:
      return "?" + std::to_string(t.meta);
    case Type::Kind::Con:
      break;
  }
  if (t.args.empty()) return t.name;
  if (t.name == "⇒") {
    std::string out;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += " ⇒ ";
      const Type& a = t.args[i];
      bool paren = a.kind == Type::Kind::Con && a.name == "⇒";
      out += paren ? "(" + to_string(a) + ")" : to_string(a);
    }
    return out;
  }
  if (t.args.size() == 1) return to_string(t.args[0]) + " " + t.name;
  std::string out = "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args[i]);
  }
  return out + ") " + t.name;
}

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Div: return "div";
    case BinOp::Mod: return "mod";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "≠";
    case BinOp::Lt: return "<";
    case BinOp::And: return "∧";
    case BinOp::Or: return "∨";
    case BinOp::Implies: return "⟶";
  }
  return "?";
}

namespace term {
namespace {
TermPtr make(Term::Node n) { return std::make_shared<const Term>(Term{std::move(n), {}}); }
}  // namespace

TermPtr var(std::string name) { return make(Term::Var{std::move(name)}); }
TermPtr nat(Nat value) { return make(Term::NatLit{std::move(value)}); }
TermPtr boolean(bool value) { return make(Term::BoolLit{value}); }
TermPtr unit() { return make(Term::UnitLit{}); }
TermPtr ref(RefId id) { return make(Term::RefLit{id}); }
TermPtr ctor(std::string name, std::vector<TermPtr> args) {
  return make(Term::Ctor{std::move(name), std::move(args)});
}
TermPtr call(std::string fun, std::vector<TermPtr> args) {
  return make(Term::Call{std::move(fun), std::move(args)});
}
TermPtr binary(BinOp op, TermPtr lhs, TermPtr rhs) {
  return make(Term::Binary{op, std::move(lhs), std::move(rhs)});
}
TermPtr negate(TermPtr arg) { return make(Term::Not{std::move(arg)}); }
TermPtr tuple(std::vector<TermPtr> elems) { return make(Term::Tuple{std::move(elems)}); }
TermPtr matches(TermPtr arg, TermPtr pattern) {
  return make(Term::Matches{std::move(arg), std::move(pattern)});
}
TermPtr nil() { return ctor("[]"); }
TermPtr cons(TermPtr head, TermPtr tail) { return ctor("#", {std::move(head), std::move(tail)}); }
TermPtr none() { return ctor("None"); }
TermPtr some(TermPtr arg) { return ctor("Some", {std::move(arg)}); }
TermPtr list(std::vector<TermPtr> elems) {
  TermPtr out = nil();
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(*it, out);
  return out;
}
}  // namespace term

namespace expr {
namespace {
ExprPtr make(Expr::Node n) { return std::make_shared<const Expr>(Expr{std::move(n), {}}); }
}  // namespace

ExprPtr ret(TermPtr value) { return make(Expr::Return{std::move(value)}); }
ExprPtr bind(std::string var, ExprPtr bound, ExprPtr body) {
  return make(Expr::Bind{std::move(var), std::move(bound), std::move(body)});
}
ExprPtr if_(TermPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  return make(Expr::If{std::move(cond), std::move(then_branch), std::move(else_branch)});
}
ExprPtr case_(TermPtr scrutinee, std::vector<CaseBranch> branches) {
  return make(Expr::Case{std::move(scrutinee), std::move(branches)});
}
ExprPtr self_call(std::vector<TermPtr> args) { return make(Expr::SelfCall{std::move(args)}); }
ExprPtr ext_call(std::string fun, std::vector<TermPtr> args) {
  return make(Expr::ExtCall{std::move(fun), std::move(args)});
}
ExprPtr ref_new(TermPtr value) { return make(Expr::RefNew{std::move(value)}); }
ExprPtr ref_get(TermPtr ref) { return make(Expr::RefGet{std::move(ref)}); }
ExprPtr ref_set(TermPtr ref, TermPtr value) {
  return make(Expr::RefSet{std::move(ref), std::move(value)});
}
}  // namespace expr

std::string FunDef::source_name(const std::string& var) const {
  auto it = source_names.find(var);
  return it == source_names.end() ? var : it->second;
}

const FunDef* Program::find_fun(std::string_view name) const {
  for (const auto& f : fun_defs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const PureDef* Program::find_pure(std::string_view name) const {
  for (const auto& f : pure_defs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const DataDecl* Program::find_data(std::string_view name) const {
  for (const auto& d : data_decls) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::optional<CtorInfo> Program::find_ctor(std::string_view name) const {
  for (const auto& d : data_decls) {
    for (const auto& c : d.constructors) {
      if (c.name == name) return CtorInfo{&d, &c};
    }
  }
  return std::nullopt;
}

std::string_view to_string(StaticError::Kind kind) {
  switch (kind) {
    case StaticError::Kind::Syntax: return "SyntaxError";
    case StaticError::Kind::Scope: return "ScopeError";
    case StaticError::Kind::Monad: return "MonadError";
    case StaticError::Kind::Type: return "TypeError";
  }
  return "Error";
}

StaticError::StaticError(Kind kind, SourceLoc loc, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(loc.line) +
                         ":" + std::to_string(loc.column) + ": " + message),
      kind_(kind),
      loc_(loc),
      detail_(message) {}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace {

void collect(const Term& t, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          if (n.name != "_") out.insert(n.name);
        } else if constexpr (std::is_same_v<N, Term::Ctor> || std::is_same_v<N, Term::Call>) {
          for (const auto& a : n.args) collect(*a, out);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          collect(*n.arg, out);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          for (const auto& a : n.elems) collect(*a, out);
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          collect(*n.arg, out);
        }
      },
      t.node);
}

void collect(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Return>) {
          collect(*n.value, out);
        } else if constexpr (std::is_same_v<N, Expr::Bind>) {
          collect(*n.bound, out);
          std::set<std::string> inner;
          collect(*n.body, inner);
          inner.erase(n.var);
          out.insert(inner.begin(), inner.end());
        } else if constexpr (std::is_same_v<N, Expr::If>) {
          collect(*n.cond, out);
          collect(*n.then_branch, out);
          collect(*n.else_branch, out);
        } else if constexpr (std::is_same_v<N, Expr::Case>) {
          collect(*n.scrutinee, out);
          for (const auto& br : n.branches) {
            std::set<std::string> inner;
            collect(*br.body, inner);
            for (const auto& v : br.vars) inner.erase(v);
            out.insert(inner.begin(), inner.end());
          }
        } else if constexpr (std::is_same_v<N, Expr::SelfCall> ||
                             std::is_same_v<N, Expr::ExtCall>) {
          for (const auto& a : n.args) collect(*a, out);
        } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
          collect(*n.value, out);
        } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
          collect(*n.ref, out);
        } else {
          collect(*n.ref, out);
          collect(*n.value, out);
        }
      },
      e.node);
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect(t, out);
  return out;
}

bool mentions_function(const Term& t, std::string_view fun) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          return n.name == fun;
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          if (n.fun == fun) return true;
          for (const auto& a : n.args) {
            if (mentions_function(*a, fun)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          for (const auto& a : n.args) {
            if (mentions_function(*a, fun)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          return mentions_function(*n.lhs, fun) || mentions_function(*n.rhs, fun);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return mentions_function(*n.arg, fun);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          for (const auto& a : n.elems) {
            if (mentions_function(*a, fun)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          return mentions_function(*n.arg, fun) || mentions_function(*n.pattern, fun);
        } else {
          return false;
        }
      },
      t.node);
}

bool mentions_function(const Expr& e, std::string_view fun) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        auto any = [&](const std::vector<TermPtr>& ts) {
          for (const auto& a : ts) {
            if (mentions_function(*a, fun)) return true;
          }
          return false;
        };
        if constexpr (std::is_same_v<N, Expr::Return>) {
          return mentions_function(*n.value, fun);
        } else if constexpr (std::is_same_v<N, Expr::Bind>) {
          return mentions_function(*n.bound, fun) || mentions_function(*n.body, fun);
        } else if constexpr (std::is_same_v<N, Expr::If>) {
          return mentions_function(*n.cond, fun) || mentions_function(*n.then_branch, fun) ||
                 mentions_function(*n.else_branch, fun);
        } else if constexpr (std::is_same_v<N, Expr::Case>) {
          if (mentions_function(*n.scrutinee, fun)) return true;
          for (const auto& br : n.branches) {
            if (mentions_function(*br.body, fun)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
          return true;
        } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
          return n.fun == fun || any(n.args);
        } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
          return mentions_function(*n.value, fun);
        } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
          return mentions_function(*n.ref, fun);
        } else {
          return mentions_function(*n.ref, fun) || mentions_function(*n.value, fun);
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Alpha equivalence
// ---------------------------------------------------------------------------

namespace {

// Bijection between the binders of the two sides, as a stack of scopes.
struct Renaming {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool same_var(const std::string& a, const std::string& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;
  }
};

bool alpha_terms(const Term& a, const Term& b, const Renaming& r);

bool alpha_term_lists(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b,
                      const Renaming& r) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_terms(*a[i], *b[i], r)) return false;
  }
  return true;
}

bool alpha_terms(const Term& a, const Term& b, const Renaming& r) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const N& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Term::Var>) {
          return r.same_var(x.name, y.name);
        } else if constexpr (std::is_same_v<N, Term::NatLit> || std::is_same_v<N, Term::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
          return true;
        } else if constexpr (std::is_same_v<N, Term::RefLit>) {
          return x.id == y.id;
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          return x.name == y.name && alpha_term_lists(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return x.fun == y.fun && alpha_term_lists(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          return x.op == y.op && alpha_terms(*x.lhs, *y.lhs, r) && alpha_terms(*x.rhs, *y.rhs, r);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return alpha_terms(*x.arg, *y.arg, r);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          return alpha_term_lists(x.elems, y.elems, r);
        } else {
          return alpha_terms(*x.arg, *y.arg, r) && alpha_terms(*x.pattern, *y.pattern, r);
        }
      },
      a.node);
}

bool alpha_exprs(const Expr& a, const Expr& b, Renaming& r) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const N& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Expr::Return>) {
          return alpha_terms(*x.value, *y.value, r);
        } else if constexpr (std::is_same_v<N, Expr::Bind>) {
          if (!alpha_exprs(*x.bound, *y.bound, r)) return false;
          r.pairs.emplace_back(x.var, y.var);
          bool ok = alpha_exprs(*x.body, *y.body, r);
          r.pairs.pop_back();
          return ok;
        } else if constexpr (std::is_same_v<N, Expr::If>) {
          return alpha_terms(*x.cond, *y.cond, r) &&
                 alpha_exprs(*x.then_branch, *y.then_branch, r) &&
                 alpha_exprs(*x.else_branch, *y.else_branch, r);
        } else if constexpr (std::is_same_v<N, Expr::Case>) {
          if (!alpha_terms(*x.scrutinee, *y.scrutinee, r)) return false;
          if (x.branches.size() != y.branches.size()) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            const auto& bx = x.branches[i];
            const auto& by = y.branches[i];
            if (bx.ctor != by.ctor || bx.vars.size() != by.vars.size()) return false;
            for (std::size_t k = 0; k < bx.vars.size(); ++k) {
              r.pairs.emplace_back(bx.vars[k], by.vars[k]);
            }
            bool ok = alpha_exprs(*bx.body, *by.body, r);
            r.pairs.resize(r.pairs.size() - bx.vars.size());
            if (!ok) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
          return alpha_term_lists(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
          return x.fun == y.fun && alpha_term_lists(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
          return alpha_terms(*x.value, *y.value, r);
        } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
          return alpha_terms(*x.ref, *y.ref, r);
        } else {
          return alpha_terms(*x.ref, *y.ref, r) && alpha_terms(*x.value, *y.value, r);
        }
      },
      a.node);
}

bool same_params(const std::vector<Param>& a, const std::vector<Param>& b, Renaming& r) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].type == b[i].type)) return false;
    r.pairs.emplace_back(a[i].name, b[i].name);
  }
  return true;
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) { return alpha_terms(a, b, Renaming{}); }

bool alpha_equal(const Expr& a, const Expr& b) {
  Renaming r;
  return alpha_exprs(a, b, r);
}

bool alpha_equal(const Program& a, const Program& b) {
  if (a.data_decls.size() != b.data_decls.size() || a.pure_defs.size() != b.pure_defs.size() ||
      a.fun_defs.size() != b.fun_defs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.data_decls.size(); ++i) {
    const auto& x = a.data_decls[i];
    const auto& y = b.data_decls[i];
    if (x.name != y.name || x.type_params != y.type_params ||
        x.constructors.size() != y.constructors.size()) {
      return false;
    }
    for (std::size_t k = 0; k < x.constructors.size(); ++k) {
      if (x.constructors[k].name != y.constructors[k].name ||
          x.constructors[k].fields != y.constructors[k].fields) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.pure_defs.size(); ++i) {
    const auto& x = a.pure_defs[i];
    const auto& y = b.pure_defs[i];
    Renaming r;
    if (x.name != y.name || !(x.result_type == y.result_type) ||
        !same_params(x.params, y.params, r) || !alpha_terms(*x.body, *y.body, r)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.fun_defs.size(); ++i) {
    const auto& x = a.fun_defs[i];
    const auto& y = b.fun_defs[i];
    Renaming r;
    if (x.name != y.name || x.monad != y.monad || !(x.result_type == y.result_type) ||
        !same_params(x.params, y.params, r) || !alpha_exprs(*x.body, *y.body, r)) {
      return false;
    }
  }
  return true;
}

}  // namespace mfx
