#include "induction/terms.hpp"

namespace mfx {

namespace {

struct Renaming {
  std::set<std::string> bound_a, bound_b;
  std::map<std::string, std::string> fwd, bwd;
};

bool match_var(const std::string& x, const std::string& y, Renaming& r) {
  bool ba = r.bound_a.count(x) > 0;
  bool bb = r.bound_b.count(y) > 0;
  if (ba != bb) return false;
  if (!ba) return x == y;
  auto f = r.fwd.find(x);
  auto b = r.bwd.find(y);
  if (f != r.fwd.end() || b != r.bwd.end()) {
    return f != r.fwd.end() && f->second == y && b != r.bwd.end() && b->second == x;
  }
  r.fwd[x] = y;
  r.bwd[y] = x;
  return true;
}

// Rewrites `a ≠ b` as `¬ (a = b)`.
TermPtr normalize(const TermPtr& t) {
  if (!t) return t;
  if (const auto* b = t->as<Term::Binary>(); b && b->op == BinOp::Ne) {
    return term::negate(term::binary(BinOp::Eq, b->lhs, b->rhs));
  }
  return t;
}

bool match(const TermPtr& pa, const TermPtr& pb, Renaming& r);

bool match_all(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b, Renaming& r) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!match(a[i], b[i], r)) return false;
  }
  return true;
}

bool match(const TermPtr& pa, const TermPtr& pb, Renaming& r) {
  if (!pa || !pb) return !pa && !pb;
  TermPtr na = normalize(pa);
  TermPtr nb = normalize(pb);
  const Term& a = *na;
  const Term& b = *nb;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const auto& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Term::Var>) {
          return match_var(x.name, y.name, r);
        } else if constexpr (std::is_same_v<N, Term::NatLit> || std::is_same_v<N, Term::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
          return true;
        } else if constexpr (std::is_same_v<N, Term::RefLit>) {
          return x.id == y.id;
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          return x.name == y.name && match_all(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return match_var(x.fun, y.fun, r) && match_all(x.args, y.args, r);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          if (x.op != y.op) return false;
          if (x.op == BinOp::Eq) {
            Renaming save = r;
            if (match(x.lhs, y.lhs, r) && match(x.rhs, y.rhs, r)) return true;
            r = save;
            return match(x.lhs, y.rhs, r) && match(x.rhs, y.lhs, r);
          }
          return match(x.lhs, y.lhs, r) && match(x.rhs, y.rhs, r);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return match(x.arg, y.arg, r);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          return match_all(x.elems, y.elems, r);
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          return match(x.arg, y.arg, r) && alpha_equal(*x.pattern, *y.pattern);
        }
      },
      a.node);
}

enum class Shape { Equation, Prop, Sem, General, Body };

// Equation-like premises (heap reads, heap equations, option results and
// conditions of the form a = b) are interchangeable.
Shape shape_of(const Premise& p, TermPtr& l, TermPtr& r) {
  switch (p.kind) {
    case Premise::Kind::Eq:
    case Premise::Kind::HeapGet:
    case Premise::Kind::HeapEq:
    case Premise::Kind::OptEq:
      l = p.lhs;
      r = p.rhs;
      return Shape::Equation;
    case Premise::Kind::Cond:
    case Premise::Kind::Hyp:
      if (const auto* b = p.term->as<Term::Binary>(); b && b->op == BinOp::Eq) {
        l = b->lhs;
        r = b->rhs;
        return Shape::Equation;
      }
      l = p.term;
      return Shape::Prop;
    case Premise::Kind::Sem:
      l = p.lhs;
      r = p.rhs;
      return Shape::Sem;
    case Premise::Kind::GeneralHyp:
      return Shape::General;
    case Premise::Kind::Body:
      return Shape::Body;
  }
  return Shape::Prop;
}

bool match_scoped(const Premise& a, const Premise& b, Renaming& r) {
  if (a.binders.size() != b.binders.size()) return false;
  Renaming inner = r;
  for (std::size_t i = 0; i < a.binders.size(); ++i) {
    inner.bound_a.insert(a.binders[i]);
    inner.bound_b.insert(b.binders[i]);
    inner.fwd[a.binders[i]] = b.binders[i];
    inner.bwd[b.binders[i]] = a.binders[i];
  }
  if (!match(a.lhs, b.lhs, inner) || !match(a.rhs, b.rhs, inner) || !match(a.term, b.term, inner)) {
    return false;
  }
  for (std::size_t i = 0; i < a.binders.size(); ++i) {
    inner.fwd.erase(a.binders[i]);
    inner.bwd.erase(b.binders[i]);
    if (!r.bound_a.count(a.binders[i])) inner.bound_a.erase(a.binders[i]);
    if (!r.bound_b.count(b.binders[i])) inner.bound_b.erase(b.binders[i]);
  }
  for (const auto& [k, v] : r.fwd) inner.fwd[k] = v;
  for (const auto& [k, v] : r.bwd) inner.bwd[k] = v;
  r = std::move(inner);
  return true;
}

bool match_body(const Premise& a, const Premise& b, Renaming& r) {
  if (!alpha_equal(*a.body, *b.body) || !match(a.rhs, b.rhs, r)) return false;
  std::set<std::string> fa = free_vars(*a.body);
  std::set<std::string> fb = free_vars(*b.body);
  for (const auto& x : fa) {
    auto it = r.fwd.find(x);
    std::string y = it == r.fwd.end() ? x : it->second;
    if (!fb.count(y)) return false;
  }
  return fa.size() == fb.size();
}

bool match_premise(const Premise& a, const Premise& b, Renaming& r) {
  TermPtr al, ar, bl, br;
  Shape sa = shape_of(a, al, ar);
  Shape sb = shape_of(b, bl, br);
  if (sa != sb) return false;
  switch (sa) {
    case Shape::Equation: {
      Renaming save = r;
      if (match(al, bl, r) && match(ar, br, r)) return true;
      r = save;
      if (match(al, br, r) && match(ar, bl, r)) return true;
      r = save;
      return false;
    }
    case Shape::Prop:
      return match(al, bl, r);
    case Shape::Sem:
      return match(al, bl, r) && match(ar, br, r);
    case Shape::General:
      return match_scoped(a, b, r);
    case Shape::Body:
      return match_body(a, b, r);
  }
  return false;
}

bool match_premises(const std::vector<Premise>& a, const std::vector<Premise>& b, std::size_t i,
                    std::vector<bool>& used, Renaming& r) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    Renaming save = r;
    if (match_premise(a[i], b[j], r)) {
      used[j] = true;
      if (match_premises(a, b, i + 1, used, r)) return true;
      used[j] = false;
    }
    r = std::move(save);
  }
  return false;
}

bool equivalent(const Obligation& a, const Obligation& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.vars.size() != b.vars.size()) {
    return fail("bound variable count differs (" + std::to_string(a.vars.size()) + " vs " +
                std::to_string(b.vars.size()) + ")");
  }
  if (a.premises.size() != b.premises.size()) {
    return fail("premise count differs (" + std::to_string(a.premises.size()) + " vs " +
                std::to_string(b.premises.size()) + ")");
  }
  Renaming r;
  for (const auto& v : a.vars) r.bound_a.insert(v.name);
  for (const auto& v : b.vars) r.bound_b.insert(v.name);
  if (!match(a.conclusion, b.conclusion, r)) {
    return fail("conclusions differ: " + render_logic(*a.conclusion) + " vs " +
                render_logic(*b.conclusion));
  }
  std::vector<bool> used(b.premises.size(), false);
  if (!match_premises(a.premises, b.premises, 0, used, r)) {
    return fail("premises cannot be matched under a consistent renaming");
  }
  return true;
}

}  // namespace

bool obligations_alpha_equivalent(const Obligation& a, const Obligation& b) {
  return equivalent(a, b, nullptr);
}

bool rules_alpha_equivalent(const InductionRule& a, const InductionRule& b, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.function != b.function) return fail("functions differ");
  if (a.monad != b.monad) return fail("monads differ");
  if (a.obligations.size() != b.obligations.size()) {
    return fail("obligation count differs (" + std::to_string(a.obligations.size()) + " vs " +
                std::to_string(b.obligations.size()) + ")");
  }
  for (std::size_t i = 0; i < a.obligations.size(); ++i) {
    std::string detail;
    if (!equivalent(a.obligations[i], b.obligations[i], &detail)) {
      return fail("obligation " + std::to_string(i + 1) + ": " + detail);
    }
  }
  return true;
}

}  // namespace mfx
