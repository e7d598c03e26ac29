#include <functional>
#include <set>

#include "induction/terms.hpp"

namespace mfx {

namespace {

using detail::q_app;
using detail::var_name;

struct Path {
  std::vector<TypedVar> vars;
  std::vector<Premise> premises;
};

using Cont = std::function<void(Path)>;

class Splitter {
 public:
  Splitter(const FunDef& f, std::set<std::string> taken)
      : fun_(f), heap_(f.monad == Monad::Heap), taken_(std::move(taken)) {}

  // Walks `e` in pre-heap `hc`, constraining its result to `v` and its
  // post-heap to `hv`, then hands each resulting path to `k`.
  void walk(const Expr& e, const Derivation* d, const TermPtr& hc, const TermPtr& v,
            const TermPtr& hv, Path p, const Cont& k) {
    check_rule(e, d);
    if (const auto* r = e.as<Expr::Return>()) {
      p.premises.push_back(Premise::eq(Premise::Kind::Eq, r->value, v));
      if (heap_) p.premises.push_back(Premise::eq(Premise::Kind::HeapEq, hv, hc));
      k(std::move(p));
    } else if (const auto* b = e.as<Expr::Bind>()) {
      std::string name = binder(b->var);
      p.vars.push_back({name, local_type(b->var)});
      TermPtr x = term::var(name);
      TermPtr hm;
      if (heap_) {
        std::string hn = fresh_heap();
        p.vars.push_back({hn, Type::heap()});
        hm = term::var(hn);
      }
      const Derivation* d1 = child(d, 0);
      const Derivation* d2 = child(d, 1);
      // Anonymous binders are named on the fly; the body refers to the
      // original unique name, which only matters for named binders.
      ExprPtr body = b->body;
      walk(*b->bound, d1, hc, x, hm, std::move(p), [&, body, x, hm, d2](Path q) {
        walk(*body, d2, hm, v, hv, std::move(q), k);
      });
    } else if (const auto* i = e.as<Expr::If>()) {
      Path neg = p;
      p.premises.push_back(Premise::cond(i->cond));
      walk(*i->then_branch, child(d, 0), hc, v, hv, std::move(p), k);
      neg.premises.push_back(Premise::cond(term::negate(i->cond)));
      walk(*i->else_branch, child(d, 1), hc, v, hv, std::move(neg), k);
    } else if (const auto* c = e.as<Expr::Case>()) {
      for (std::size_t n = 0; n < c->branches.size(); ++n) {
        const auto& br = c->branches[n];
        Path q = p;
        std::vector<TermPtr> args;
        std::map<std::string, TermPtr> rename;
        for (const auto& var : br.vars) {
          std::string name = binder(var);
          q.vars.push_back({name, local_type(var)});
          args.push_back(term::var(name));
        }
        q.premises.push_back(
            Premise::eq(Premise::Kind::Eq, c->scrutinee, term::ctor(br.ctor, std::move(args))));
        walk(*br.body, child(d, n), hc, v, hv, std::move(q), k);
      }
    } else if (const auto* s = e.as<Expr::SelfCall>()) {
      std::vector<TermPtr> args = s->args;
      if (heap_) {
        args.push_back(hc);
        args.push_back(hv);
      }
      args.push_back(v);
      p.premises.push_back(Premise::hyp(q_app(std::move(args))));
      k(std::move(p));
    } else if (const auto* x = e.as<Expr::ExtCall>()) {
      TermPtr call = term::call(x->fun, x->args);
      if (heap_) {
        p.premises.push_back(Premise::eq(Premise::Kind::Sem, term::tuple({hc, hv, v}), call));
      } else {
        p.premises.push_back(Premise::eq(Premise::Kind::OptEq, call, term::some(v)));
      }
      k(std::move(p));
    } else if (const auto* g = e.as<Expr::RefGet>()) {
      p.premises.push_back(
          Premise::eq(Premise::Kind::HeapGet, v, term::call("get_ref", {g->ref, hc})));
      // Oriented so that the fresh post-heap is the one substituted away.
      p.premises.push_back(Premise::eq(Premise::Kind::HeapEq, hc, hv));
      k(std::move(p));
    } else if (const auto* st = e.as<Expr::RefSet>()) {
      p.premises.push_back(Premise::eq(Premise::Kind::Eq, term::unit(), v));
      p.premises.push_back(Premise::eq(Premise::Kind::HeapEq, hv,
                                       term::call("set_ref", {st->ref, st->value, hc})));
      k(std::move(p));
    } else if (const auto* nw = e.as<Expr::RefNew>()) {
      p.premises.push_back(Premise::eq(Premise::Kind::HeapEq, term::tuple({v, hv}),
                                       term::call("new_ref_with", {nw->value, hc})));
      k(std::move(p));
    }
  }

  std::string fresh_heap() {
    std::string name = "h";
    do {
      name += "'";
    } while (taken_.count(name));
    taken_.insert(name);
    return name;
  }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int k = 1; taken_.count(name); ++k) name = base + std::to_string(k);
    taken_.insert(name);
    return name;
  }

 private:
  static const Derivation* child(const Derivation* d, std::size_t i) {
    if (!d || d->rule == Rule::Const) return d;
    return i < d->children.size() ? &d->children[i] : nullptr;
  }

  // The derivation is followed in lockstep with the body; a mismatch means
  // the two were not produced from the same definition.
  static void check_rule(const Expr& e, const Derivation* d) {
    if (!d || d->rule == Rule::Const) return;
    bool ok = (d->rule == Rule::Bind && e.as<Expr::Bind>()) ||
              (d->rule == Rule::If && e.as<Expr::If>()) ||
              (d->rule == Rule::Case && e.as<Expr::Case>()) ||
              (d->rule == Rule::Rec && e.as<Expr::SelfCall>());
    if (!ok) {
      throw std::logic_error("derivation does not match the function body at rule " +
                             std::string(to_string(d->rule)));
    }
  }

  std::string binder(const std::string& var) {
    if (var.size() > 1 && var[0] == '_') {
      auto it = anon_.find(var);
      if (it == anon_.end()) it = anon_.emplace(var, fresh("u")).first;
      return it->second;
    }
    return var;
  }

  Type local_type(const std::string& var) const {
    auto it = fun_.local_types.find(var);
    return it == fun_.local_types.end() ? Type::unit() : it->second;
  }

  const FunDef& fun_;
  bool heap_;
  std::set<std::string> taken_;
  std::map<std::string, std::string> anon_;
};

bool is_bound(const Obligation& ob, const std::string& name) {
  for (const auto& v : ob.vars) {
    if (v.name == name) return true;
  }
  return false;
}

void eliminate(Obligation& ob, std::size_t premise, const std::string& var, const TermPtr& by) {
  std::map<std::string, TermPtr> sub{{var, by}};
  ob.premises.erase(ob.premises.begin() + static_cast<std::ptrdiff_t>(premise));
  for (auto& p : ob.premises) p = detail::substitute(p, sub);
  ob.conclusion = detail::substitute(ob.conclusion, sub);
  std::erase_if(ob.vars, [&](const TypedVar& v) { return v.name == var; });
}

// Chooses a variable to eliminate from `a = b`: the right side if both are
// eliminable, otherwise whichever side is.
std::optional<std::pair<std::string, TermPtr>> pick(const Obligation& ob, const TermPtr& a,
                                                    const TermPtr& b) {
  auto eliminable = [&](const TermPtr& side, const TermPtr& other) {
    const std::string* n = var_name(*side);
    return n && is_bound(ob, *n) && !detail::occurs_in(*n, *other) ? n : nullptr;
  };
  if (const std::string* n = eliminable(b, a)) return std::make_pair(*n, a);
  if (const std::string* n = eliminable(a, b)) return std::make_pair(*n, b);
  return std::nullopt;
}

bool is_equation(const Premise& p, TermPtr& a, TermPtr& b) {
  switch (p.kind) {
    case Premise::Kind::Eq:
    case Premise::Kind::HeapEq:
      a = p.lhs;
      b = p.rhs;
      return true;
    case Premise::Kind::Cond:
      if (const auto* bin = p.term->as<Term::Binary>(); bin && bin->op == BinOp::Eq) {
        a = bin->lhs;
        b = bin->rhs;
        return true;
      }
      return false;
    default:
      return false;
  }
}

bool trivial(const Premise& p) {
  switch (p.kind) {
    case Premise::Kind::Eq:
    case Premise::Kind::HeapEq:
    case Premise::Kind::HeapGet:
      return alpha_equal(*p.lhs, *p.rhs);
    case Premise::Kind::Cond:
      if (const auto* b = p.term->as<Term::BoolLit>()) return b->value;
      if (const auto* bin = p.term->as<Term::Binary>(); bin && bin->op == BinOp::Eq) {
        return alpha_equal(*bin->lhs, *bin->rhs);
      }
      return false;
    default:
      return false;
  }
}

void simplify(Obligation& ob) {
  // Substitute equations v = t, in premise order.
  for (std::size_t i = 0; i < ob.premises.size();) {
    TermPtr a, b;
    if (is_equation(ob.premises[i], a, b)) {
      if (auto choice = pick(ob, a, b)) {
        eliminate(ob, i, choice->first, choice->second);
        continue;
      }
    }
    ++i;
  }
  // Heap reads whose result is still a plain variable are inlined.
  for (std::size_t i = 0; i < ob.premises.size();) {
    const Premise& p = ob.premises[i];
    if (p.kind == Premise::Kind::HeapGet) {
      const std::string* n = var_name(*p.lhs);
      if (n && is_bound(ob, *n) && !detail::occurs_in(*n, *p.rhs)) {
        std::string name = *n;
        TermPtr by = p.rhs;
        eliminate(ob, i, name, by);
        continue;
      }
    }
    ++i;
  }
  std::erase_if(ob.premises, trivial);
}

void collect_order(const Term& t, std::vector<std::string>& order) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          if (std::find(order.begin(), order.end(), n.name) == order.end()) {
            order.push_back(n.name);
          }
        } else if constexpr (std::is_same_v<N, Term::Ctor> || std::is_same_v<N, Term::Call>) {
          for (const auto& a : n.args) collect_order(*a, order);
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          collect_order(*n.lhs, order);
          collect_order(*n.rhs, order);
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          collect_order(*n.arg, order);
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          for (const auto& a : n.elems) collect_order(*a, order);
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          collect_order(*n.arg, order);
        }
      },
      t.node);
}

// Order of first occurrence: premises left to right, then the conclusion.
std::vector<std::string> occurrence_order(const Obligation& ob, bool conclusion_first) {
  std::vector<std::string> order;
  if (conclusion_first) collect_order(*ob.conclusion, order);
  for (const auto& p : ob.premises) {
    for (const auto* t : {&p.lhs, &p.rhs, &p.term}) {
      if (*t) collect_order(**t, order);
    }
  }
  collect_order(*ob.conclusion, order);
  return order;
}

// Drops unused variables, renames heaps to h, h', h'', … starting with the
// pre-heap and then by first occurrence, restores source spellings of binders, and orders the ⋀ prefix
// by first occurrence in the conclusion and then the premises.
void tidy(Obligation& ob, const FunDef& f) {
  std::vector<std::string> order = occurrence_order(ob, false);
  std::erase_if(ob.vars, [&](const TypedVar& v) {
    return std::find(order.begin(), order.end(), v.name) == order.end();
  });
  if (f.monad == Monad::Heap) {
    const auto& qargs = ob.conclusion->as<Term::Call>()->args;
    if (const auto* pre = qargs[f.params.size()]->as<Term::Var>()) {
      std::erase(order, pre->name);
      order.insert(order.begin(), pre->name);
    }
  }

  std::map<std::string, std::string> target;
  std::set<std::string> used;
  std::set<std::string> non_heap;
  for (const auto& v : ob.vars) {
    if (!v.type.is("heap")) non_heap.insert(f.source_name(v.name));
  }
  std::string heap_name = "h";
  while (non_heap.count(heap_name)) heap_name += "h";
  for (const auto& name : order) {
    auto it = std::find_if(ob.vars.begin(), ob.vars.end(),
                           [&](const TypedVar& v) { return v.name == name; });
    if (it == ob.vars.end() || !it->type.is("heap")) continue;
    target[name] = heap_name;
    used.insert(heap_name);
    heap_name += "'";
  }
  for (const auto& name : order) {
    auto it = std::find_if(ob.vars.begin(), ob.vars.end(),
                           [&](const TypedVar& v) { return v.name == name; });
    if (it == ob.vars.end() || target.count(name)) continue;
    std::string base = f.source_name(name);
    std::string chosen = base;
    for (int k = 1; used.count(chosen); ++k) chosen = base + std::to_string(k);
    used.insert(chosen);
    target[name] = chosen;
  }

  std::map<std::string, TermPtr> sub;
  for (const auto& [from, to] : target) {
    if (from != to) sub[from] = term::var(to);
  }
  for (auto& p : ob.premises) p = detail::substitute(p, sub);
  ob.conclusion = detail::substitute(ob.conclusion, sub);
  for (auto& v : ob.vars) v.name = target[v.name];

  std::vector<std::string> final_order = occurrence_order(ob, true);
  std::stable_sort(ob.vars.begin(), ob.vars.end(), [&](const TypedVar& a, const TypedVar& b) {
    auto ia = std::find(final_order.begin(), final_order.end(), a.name);
    auto ib = std::find(final_order.begin(), final_order.end(), b.name);
    return ia < ib;
  });
}

}  // namespace

InductionRule refine(const Program& program, const InductionRule& raw, const FunDef& f,
                     const Derivation& derivation) {
  (void)program;
  if (raw.kind != InductionRule::Kind::Raw) {
    throw std::invalid_argument("refine expects a raw rule");
  }
  if (derivation.rule != Rule::Lam || derivation.children.size() != 1) {
    throw std::invalid_argument("derivation must have a single (Lam) root");
  }
  bool heap = f.monad == Monad::Heap;

  std::set<std::string> taken{f.name, "Q"};
  for (const auto& p : f.params) taken.insert(p.name);
  for (const auto& [name, type] : f.local_types) taken.insert(name);
  for (const auto& v : raw.schema_vars) taken.insert(v.name);

  InductionRule rule = raw;
  rule.kind = InductionRule::Kind::Refined;
  rule.obligations.clear();

  // schema_vars: params, [h, h'], y
  std::size_t np = f.params.size();
  std::vector<TermPtr> params;
  Path start;
  for (std::size_t i = 0; i < np; ++i) {
    params.push_back(term::var(raw.schema_vars[i].name));
    start.vars.push_back(raw.schema_vars[i]);
  }
  TermPtr h, h2;
  if (heap) {
    h = term::var(raw.schema_vars[np].name);
    h2 = term::var(raw.schema_vars[np + 1].name);
    start.vars.push_back(raw.schema_vars[np]);
    start.vars.push_back(raw.schema_vars[np + 1]);
  }
  const TypedVar& yv = raw.schema_vars.back();
  TermPtr y = term::var(yv.name);
  start.vars.push_back(yv);

  std::vector<TermPtr> qargs = params;
  if (heap) {
    qargs.push_back(h);
    qargs.push_back(h2);
  }
  qargs.push_back(y);
  TermPtr conclusion = q_app(qargs);

  Splitter splitter(f, taken);
  splitter.walk(*f.body, &derivation.children[0], h, y, h2, std::move(start), [&](Path p) {
    Obligation ob{std::move(p.vars), std::move(p.premises), conclusion};
    simplify(ob);
    tidy(ob, f);
    rule.obligations.push_back(std::move(ob));
  });
  return rule;
}

}  // namespace mfx
