#include <set>

#include "induction/terms.hpp"

namespace mfx {

namespace detail {

TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
  if (!t || sub.empty()) return t;
  auto list = [&](const std::vector<TermPtr>& xs) {
    std::vector<TermPtr> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(substitute(x, sub));
    return out;
  };
  return std::visit(
      [&](const auto& n) -> TermPtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          auto it = sub.find(n.name);
          return it == sub.end() ? t : it->second;
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          return term::ctor(n.name, list(n.args));
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return term::call(n.fun, list(n.args));
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          return term::binary(n.op, substitute(n.lhs, sub), substitute(n.rhs, sub));
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return term::negate(substitute(n.arg, sub));
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          return term::tuple(list(n.elems));
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          return term::matches(substitute(n.arg, sub), n.pattern);
        } else {
          return t;
        }
      },
      t->node);
}

Premise substitute(const Premise& p, const std::map<std::string, TermPtr>& sub) {
  std::map<std::string, TermPtr> inner = sub;
  for (const auto& b : p.binders) inner.erase(b);
  Premise out = p;
  out.lhs = substitute(p.lhs, inner);
  out.rhs = substitute(p.rhs, inner);
  out.term = substitute(p.term, inner);
  return out;
}

bool occurs_in(const std::string& var, const Term& t) { return free_vars(t).count(var) > 0; }

TermPtr q_app(std::vector<TermPtr> args) { return term::call("Q", std::move(args)); }

}  // namespace detail

NotContinuous::NotContinuous(const ContinuityFailure& f)
    : std::runtime_error("not continuous at " + f.path_string() + ": " + f.reason) {}

std::string_view to_string(Premise::Kind k) {
  switch (k) {
    case Premise::Kind::Eq: return "eq";
    case Premise::Kind::Cond: return "cond";
    case Premise::Kind::HeapGet: return "heap_get";
    case Premise::Kind::HeapEq: return "heap_eq";
    case Premise::Kind::Hyp: return "hyp";
    case Premise::Kind::OptEq: return "opt_eq";
    case Premise::Kind::Sem: return "sem";
    case Premise::Kind::GeneralHyp: return "general_hyp";
    case Premise::Kind::Body: return "body";
  }
  return "?";
}

std::set<std::string> premise_vars(const Premise& p) {
  std::set<std::string> out;
  for (const auto* t : {&p.lhs, &p.rhs, &p.term}) {
    if (*t) {
      auto fv = free_vars(**t);
      out.insert(fv.begin(), fv.end());
    }
  }
  if (p.body) {
    auto fv = free_vars(*p.body);
    out.insert(fv.begin(), fv.end());
  }
  for (const auto& b : p.binders) out.erase(b);
  return out;
}

namespace {

std::string fresh(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  for (int k = 1; taken.count(name); ++k) name = base + std::to_string(k);
  taken.insert(name);
  return name;
}

}  // namespace

InductionRule raw_rule(const Program& program, const FunDef& f) {
  (void)program;
  auto cont = check_continuous(f);
  if (const auto* fail = std::get_if<ContinuityFailure>(&cont)) throw NotContinuous(*fail);
  bool heap = f.monad == Monad::Heap;
  std::set<std::string> taken{f.name, "Q"};
  for (const auto& p : f.params) taken.insert(p.name);
  for (const auto& [name, type] : f.local_types) taken.insert(name);

  InductionRule rule;
  rule.kind = InductionRule::Kind::Raw;
  rule.function = f.name;
  rule.monad = f.monad;

  std::vector<TermPtr> params;
  for (const auto& p : f.params) {
    params.push_back(term::var(p.name));
    rule.schema_vars.push_back({p.name, p.type});
  }
  std::string h, h2;
  if (heap) {
    h = fresh("h", taken);
    h2 = fresh("h'", taken);
    rule.schema_vars.push_back({h, Type::heap()});
    rule.schema_vars.push_back({h2, Type::heap()});
  }
  std::string y = fresh(f.result_type.is("list") ? "ys" : "y", taken);
  rule.schema_vars.push_back({y, f.result_type});

  auto q_of = [&](std::vector<TermPtr> args, const std::string& pre, const std::string& post,
                  const std::string& res) {
    if (heap) {
      args.push_back(term::var(pre));
      args.push_back(term::var(post));
    }
    args.push_back(term::var(res));
    return detail::q_app(std::move(args));
  };
  auto result_of = [&](const std::string& pre, const std::string& post, const std::string& res) {
    if (heap) return term::tuple({term::var(pre), term::var(post), term::var(res)});
    return term::some(term::var(res));
  };

  // General hypothesis ⋀z r. f z = Some r ⟹ Q z r, with binders fresh for
  // the whole obligation.
  Premise general;
  general.kind = Premise::Kind::GeneralHyp;
  std::vector<TermPtr> zs;
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    std::string z = fresh(f.params.size() == 1 ? "z" : "z" + std::to_string(i + 1), taken);
    general.binders.push_back(z);
    zs.push_back(term::var(z));
  }
  std::string g, g2;
  if (heap) {
    g = fresh("g", taken);
    g2 = fresh("g'", taken);
    general.binders.push_back(g);
    general.binders.push_back(g2);
  }
  std::string r = fresh("r", taken);
  general.binders.push_back(r);
  general.lhs = term::call(f.name, zs);
  general.rhs = result_of(g, g2, r);
  general.term = q_of(zs, g, g2, r);

  Premise body;
  body.kind = Premise::Kind::Body;
  body.body = f.body;
  body.rhs = result_of(h, h2, y);

  Obligation ob;
  std::vector<Type> fun_type;
  for (const auto& p : f.params) fun_type.push_back(p.type);
  fun_type.push_back(heap ? Type::con("Heap", {f.result_type}) : Type::option(f.result_type));
  ob.vars.push_back({f.name, Type::con("⇒", fun_type)});
  ob.vars.insert(ob.vars.end(), rule.schema_vars.begin(), rule.schema_vars.end());
  ob.premises = {general, body};
  ob.conclusion = q_of(params, h, h2, y);
  rule.obligations.push_back(std::move(ob));

  if (heap) {
    rule.schema_premise = Premise::eq(Premise::Kind::Sem, result_of(h, h2, y),
                                      term::call(f.name, params));
  } else {
    rule.schema_premise = Premise::eq(Premise::Kind::OptEq, term::call(f.name, params),
                                      result_of(h, h2, y));
  }
  rule.schema_conclusion = q_of(params, h, h2, y);
  return rule;
}

InductionRule refined_rule(const Program& program, const FunDef& f) {
  auto cont = check_continuous(f);
  if (const auto* fail = std::get_if<ContinuityFailure>(&cont)) throw NotContinuous(*fail);
  InductionRule raw = raw_rule(program, f);
  return refine(program, raw, f, std::get<Derivation>(cont));
}

}  // namespace mfx
