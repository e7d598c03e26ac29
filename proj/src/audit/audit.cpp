#include <sstream>

#include "json.hpp"

#include "audit/enumerate.hpp"
#include "induction/terms.hpp"
#include "mfx/evaluator.hpp"

namespace mfx {

BudgetExceeded::BudgetExceeded(std::uint64_t budget)
    : std::runtime_error("enumeration budget of " + std::to_string(budget) + " steps exceeded") {}

namespace {

struct Fact {
  enum class Kind { Prop, Equation, Sem };
  Kind kind;
  TermPtr lhs;
  TermPtr rhs;
};

std::vector<TermPtr> conjuncts(const TermPtr& t) {
  if (const auto* b = t->as<Term::Binary>(); b && b->op == BinOp::And) {
    auto out = conjuncts(b->lhs);
    auto rest = conjuncts(b->rhs);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  return {t};
}

Fact fact_of(const TermPtr& t) {
  if (const auto* b = t->as<Term::Binary>(); b && b->op == BinOp::Eq) {
    return {Fact::Kind::Equation, b->lhs, b->rhs};
  }
  return {Fact::Kind::Prop, t, nullptr};
}

TermPtr instantiate_q(const QSpec& q, const Term& app) {
  const auto* call = app.as<Term::Call>();
  if (!call || call->fun != "Q") throw std::invalid_argument("expected an application of Q");
  if (call->args.size() != q.params.size()) {
    throw std::invalid_argument("Q takes " + std::to_string(call->args.size()) +
                                " arguments here but the spec declares " +
                                std::to_string(q.params.size()));
  }
  std::map<std::string, TermPtr> sub;
  for (std::size_t i = 0; i < q.params.size(); ++i) sub[q.params[i]] = call->args[i];
  return detail::substitute(q.body, sub);
}

bool is_pure_name(const Program& p, const std::string& n) { return p.find_pure(n) != nullptr; }

class Auditor {
 public:
  Auditor(const Program& program, const QSpec& q, const DomainBounds& bounds, const FunDef& f)
      : program_(program), q_(q), bounds_(bounds) {
    std::vector<Type> roots;
    for (const auto& p : f.params) roots.push_back(p.type);
    roots.push_back(f.result_type);
    cells_ = detail::cell_types(program, roots);
  }

  // Returns false and fills `witness` when the obligation fails.
  bool check(const Obligation& ob, Witness& witness) {
    vars_ = &ob.vars;
    std::vector<Fact> facts;
    for (const auto& p : ob.premises) {
      switch (p.kind) {
        case Premise::Kind::Eq:
        case Premise::Kind::HeapGet:
        case Premise::Kind::HeapEq:
        case Premise::Kind::OptEq:
          facts.push_back({Fact::Kind::Equation, p.lhs, p.rhs});
          break;
        case Premise::Kind::Cond:
          facts.push_back(fact_of(p.term));
          break;
        case Premise::Kind::Hyp:
          for (const auto& c : conjuncts(instantiate_q(q_, *p.term))) facts.push_back(fact_of(c));
          break;
        case Premise::Kind::Sem:
          facts.push_back({Fact::Kind::Sem, p.lhs, p.rhs});
          break;
        case Premise::Kind::GeneralHyp:
        case Premise::Kind::Body:
          throw std::invalid_argument("only refined rules can be audited");
      }
    }
    conclusion_ = instantiate_q(q_, *ob.conclusion);
    facts_ = std::move(facts);
    std::vector<std::size_t> pending(facts_.size());
    for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
    bool ok = search(pending, {});
    if (!ok) witness = witness_;
    return ok;
  }

  void tick() {
    if (++steps_ > bounds_.budget) throw BudgetExceeded(bounds_.budget);
  }

  std::uint64_t assignments() const { return assignments_; }

  const std::vector<Type>& cells() const { return cells_; }

 private:
  enum class Status { True, False, Bound, Stuck };

  bool bound(const Term& t, const LogicEnv& env) const {
    for (const auto& v : free_vars(t)) {
      if (!env.count(v) && !is_pure_name(program_, v)) return false;
    }
    return true;
  }

  LogicValue eval(const Term& t, const LogicEnv& env) const {
    return eval_logic(program_, t, env, bounds_.fuel);
  }

  // Matches a constructor/tuple pattern against a value, binding unbound
  // variables. Subterms whose variables are all bound are compared.
  bool unify(const TermPtr& pat, const LogicValue& v, LogicEnv& env) const {
    if (const auto* var = pat->as<Term::Var>()) {
      if (var->name == "_") return true;
      auto it = env.find(var->name);
      if (it != env.end()) return it->second == v;
      env.emplace(var->name, v);
      return true;
    }
    if (bound(*pat, env)) return eval(*pat, env) == v;
    if (const auto* tu = pat->as<Term::Tuple>()) {
      const auto* tv = std::get_if<LogicValue::Tuple>(&v.node);
      if (!tv || tv->elems.size() != tu->elems.size()) return false;
      for (std::size_t i = 0; i < tu->elems.size(); ++i) {
        if (!unify(tu->elems[i], tv->elems[i], env)) return false;
      }
      return true;
    }
    const auto* c = pat->as<Term::Ctor>();
    const auto* val = std::get_if<Value>(&v.node);
    if (!c || !val) return false;
    auto sub = [&](const TermPtr& p, const Value& x) { return unify(p, LogicValue{x}, env); };
    if (c->name == "Some") {
      const auto* o = val->as<Value::OptionV>();
      return o && o->inner.size() == 1 && sub(c->args[0], o->inner[0]);
    }
    if (c->name == "#") {
      const auto* l = val->as<Value::ListV>();
      if (!l || l->elems.empty()) return false;
      return sub(c->args[0], l->elems[0]) &&
             sub(c->args[1], Value::list({l->elems.begin() + 1, l->elems.end()}));
    }
    const auto* cv = val->as<Value::CtorV>();
    if (!cv || cv->name != c->name || cv->args.size() != c->args.size()) return false;
    for (std::size_t i = 0; i < c->args.size(); ++i) {
      if (!sub(c->args[i], cv->args[i])) return false;
    }
    return true;
  }

  // A side is solvable if its unbound variables only sit in pattern
  // positions.
  bool solvable(const Term& t, const LogicEnv& env) const {
    if (bound(t, env)) return true;
    if (t.as<Term::Var>()) return true;
    if (const auto* c = t.as<Term::Ctor>()) {
      for (const auto& a : c->args) {
        if (!solvable(*a, env)) return false;
      }
      return true;
    }
    if (const auto* tu = t.as<Term::Tuple>()) {
      for (const auto& a : tu->elems) {
        if (!solvable(*a, env)) return false;
      }
      return true;
    }
    return false;
  }

  Status try_fact(const Fact& f, LogicEnv& env) const {
    try {
      switch (f.kind) {
        case Fact::Kind::Prop:
          if (!bound(*f.lhs, env)) return Status::Stuck;
          return truth_of(eval(*f.lhs, env)) ? Status::True : Status::False;
        case Fact::Kind::Equation: {
          bool bl = bound(*f.lhs, env);
          bool br = bound(*f.rhs, env);
          if (bl && br) return eval(*f.lhs, env) == eval(*f.rhs, env) ? Status::True : Status::False;
          if (br && solvable(*f.lhs, env)) {
            return unify(f.lhs, eval(*f.rhs, env), env) ? Status::Bound : Status::False;
          }
          if (bl && solvable(*f.rhs, env)) {
            return unify(f.rhs, eval(*f.lhs, env), env) ? Status::Bound : Status::False;
          }
          return Status::Stuck;
        }
        case Fact::Kind::Sem: {
          const auto* tu = f.lhs->as<Term::Tuple>();
          const auto* call = f.rhs->as<Term::Call>();
          if (!tu || tu->elems.size() != 3 || !call) throw EvalError("malformed ⟦⟧ premise");
          if (!bound(*tu->elems[0], env) || !bound(*f.rhs, env)) return Status::Stuck;
          LogicValue pre = eval(*tu->elems[0], env);
          const auto* h = std::get_if<Heap>(&pre.node);
          if (!h) throw EvalError("⟦⟧ expects a heap");
          std::vector<Value> args;
          for (const auto& a : call->args) args.push_back(value_of(eval(*a, env)));
          LfpResult r = run_lfp(program_, call->fun, args, *h, bounds_.fuel);
          const auto* o = std::get_if<Outcome>(&r);
          if (!o || o->kind != Outcome::Kind::Ok) return Status::False;
          LogicValue result{LogicValue::Tuple{{LogicValue{o->heap}, LogicValue{o->value}}}};
          TermPtr rest = term::tuple({tu->elems[1], tu->elems[2]});
          return unify(rest, result, env) ? Status::Bound : Status::False;
        }
      }
    } catch (const Undefined&) {
      return Status::False;
    }
    return Status::Stuck;
  }

  static bool truth_of(const LogicValue& v) {
    const auto* x = std::get_if<Value>(&v.node);
    if (!x || !x->as<bool>()) throw EvalError("expected a boolean, got " + render(v));
    return *x->as<bool>();
  }

  static Value value_of(const LogicValue& v) {
    const auto* x = std::get_if<Value>(&v.node);
    if (!x) throw EvalError("expected a value, got " + render(v));
    return *x;
  }

  void nonpattern_vars(const Term& t, bool pattern, std::set<std::string>& out) const {
    if (const auto* v = t.as<Term::Var>()) {
      if (!pattern) out.insert(v->name);
      return;
    }
    if (const auto* c = t.as<Term::Ctor>()) {
      for (const auto& a : c->args) nonpattern_vars(*a, pattern, out);
      return;
    }
    if (const auto* tu = t.as<Term::Tuple>()) {
      for (const auto& a : tu->elems) nonpattern_vars(*a, pattern, out);
      return;
    }
    for (const auto& v : free_vars(t)) out.insert(v);
  }

  std::set<std::string> driving_vars(const Fact& f) const {
    std::set<std::string> out;
    switch (f.kind) {
      case Fact::Kind::Prop:
        nonpattern_vars(*f.lhs, false, out);
        break;
      case Fact::Kind::Equation:
        nonpattern_vars(*f.lhs, true, out);
        nonpattern_vars(*f.rhs, true, out);
        break;
      case Fact::Kind::Sem:
        nonpattern_vars(*f.rhs, false, out);
        if (const auto* tu = f.lhs->as<Term::Tuple>(); tu && !tu->elems.empty()) {
          nonpattern_vars(*tu->elems[0], false, out);
        }
        break;
    }
    return out;
  }

  std::optional<std::string> choose(const std::vector<std::size_t>& pending,
                                    const LogicEnv& env) const {
    auto first_in = [&](const std::set<std::string>& names) -> std::optional<std::string> {
      for (const auto& v : *vars_) {
        if (!env.count(v.name) && names.count(v.name)) return v.name;
      }
      return std::nullopt;
    };
    for (std::size_t i : pending) {
      if (auto v = first_in(driving_vars(facts_[i]))) return v;
    }
    for (std::size_t i : pending) {
      std::set<std::string> all;
      const Fact& f = facts_[i];
      for (const auto* t : {&f.lhs, &f.rhs}) {
        if (*t) {
          auto fv = free_vars(**t);
          all.insert(fv.begin(), fv.end());
        }
      }
      if (auto v = first_in(all)) return v;
    }
    for (const auto& v : *vars_) {
      if (!env.count(v.name)) return v.name;
    }
    return std::nullopt;
  }

  const TypedVar& var(const std::string& name) const {
    for (const auto& v : *vars_) {
      if (v.name == name) return v;
    }
    throw std::logic_error("unknown variable " + name);
  }

  const std::vector<Value>& domain(const Type& t) {
    std::string key = to_string(t);
    auto it = domains_.find(key);
    if (it == domains_.end()) {
      it = domains_.emplace(key, enumerate_values(program_, t, bounds_, bounds_.max_cells)).first;
    }
    return it->second;
  }

  bool search(std::vector<std::size_t> pending, LogicEnv env) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t k = 0; k < pending.size();) {
        tick();
        Status s = try_fact(facts_[pending[k]], env);
        if (s == Status::False) return true;
        if (s == Status::Stuck) {
          ++k;
          continue;
        }
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(k));
        progress = true;
        if (s == Status::Bound) break;
      }
    }

    std::optional<std::string> next = choose(pending, env);
    if (!next) {
      ++assignments_;
      bool holds = true;
      try {
        holds = truth_of(eval(*conclusion_, env));
      } catch (const Undefined&) {
        // e.g. a reference that is not allocated in the heap it is read from
        --assignments_;
      }
      if (!holds) {
        witness_.clear();
        for (const auto& v : *vars_) {
          auto it = env.find(v.name);
          if (it != env.end()) witness_.emplace_back(v.name, render(it->second));
        }
      }
      return holds;
    }

    const TypedVar& v = var(*next);
    if (v.type.is("heap")) {
      bool ok = true;
      detail::for_each_heap(program_, cells_, bounds_, [&](const Heap& h) {
        tick();
        LogicEnv e = env;
        e.insert_or_assign(v.name, LogicValue{h});
        ok = search(pending, std::move(e));
        return ok;
      });
      return ok;
    }
    for (const auto& x : domain(v.type)) {
      tick();
      LogicEnv e = env;
      e.insert_or_assign(v.name, LogicValue{x});
      if (!search(pending, std::move(e))) return false;
    }
    return true;
  }

  const Program& program_;
  const QSpec& q_;
  DomainBounds bounds_;
  std::vector<Type> cells_;
  std::map<std::string, std::vector<Value>> domains_;

  const std::vector<TypedVar>* vars_ = nullptr;
  std::vector<Fact> facts_;
  TermPtr conclusion_;
  Witness witness_;
  std::uint64_t steps_ = 0;
  std::uint64_t assignments_ = 0;
};

void brute_force_conclusion(const Program& program, const FunDef& f, const QSpec& q,
                            const DomainBounds& bounds, Auditor& auditor, Verdict& v) {
  bool heap_mode = f.monad == Monad::Heap;
  std::size_t expected = f.params.size() + (heap_mode ? 3 : 1);
  if (q.params.size() != expected) {
    throw std::invalid_argument("Q for '" + f.name + "' must take " + std::to_string(expected) +
                                " arguments");
  }

  auto run = [&](const Heap& h) {
    std::vector<std::vector<Value>> domains;
    for (const auto& p : f.params) {
      domains.push_back(enumerate_values(program, p.type, bounds, heap_mode ? h.next : bounds.max_cells));
    }
    std::vector<std::size_t> idx(domains.size(), 0);
    for (const auto& d : domains) {
      if (d.empty()) return true;
    }
    while (true) {
      auditor.tick();
      std::vector<Value> args;
      for (std::size_t i = 0; i < domains.size(); ++i) args.push_back(domains[i][idx[i]]);
      ++v.inputs;
      LfpResult r = run_lfp(program, f.name, args, h, bounds.fuel);
      if (const auto* o = std::get_if<Outcome>(&r); o && !o->is_bottom()) {
        ++v.terminating;
        LogicEnv env;
        std::size_t k = 0;
        for (const auto& a : args) env.emplace(q.params[k++], LogicValue{a});
        if (heap_mode) {
          env.emplace(q.params[k++], LogicValue{h});
          env.emplace(q.params[k++], LogicValue{o->heap});
        }
        env.emplace(q.params[k], LogicValue{o->value});
        bool holds = false;
        try {
          LogicValue res = eval_logic(program, *q.body, env, bounds.fuel);
          const auto* b = std::get_if<Value>(&res.node);
          holds = b && b->as<bool>() && *b->as<bool>();
        } catch (const Undefined&) {
          holds = false;
        }
        if (!holds) {
          v.conclusion_holds = false;
          for (const auto& name : q.params) v.conclusion_witness.emplace_back(name, render(env.at(name)));
          return false;
        }
      }
      std::size_t pos = domains.size();
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < domains[pos].size()) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
      if (done) return true;
    }
  };

  if (heap_mode) {
    detail::for_each_heap(program, auditor.cells(), bounds, run);
  } else {
    run(Heap{});
  }
}

std::string witness_text(const Witness& w) {
  std::string out;
  for (const auto& [name, value] : w) {
    if (!out.empty()) out += ", ";
    out += name + " = " + value;
  }
  return out;
}

}  // namespace

Verdict check_rule_sampled(const Program& program, const InductionRule& rule, const QSpec& q,
                           const DomainBounds& bounds) {
  if (rule.kind != InductionRule::Kind::Refined) {
    throw std::invalid_argument("only refined rules can be audited");
  }
  const FunDef* f = program.find_fun(rule.function);
  if (!f) throw std::invalid_argument("unknown function '" + rule.function + "'");

  Verdict v;
  Auditor auditor(program, q, bounds, *f);
  for (std::size_t i = 0; i < rule.obligations.size(); ++i) {
    Witness w;
    if (!auditor.check(rule.obligations[i], w)) {
      v.obligations_hold = false;
      v.failed_obligation = i + 1;
      v.obligation_witness = std::move(w);
      break;
    }
  }
  v.assignments_checked = auditor.assignments();
  brute_force_conclusion(program, *f, q, bounds, auditor, v);
  return v;
}

std::string render_text(const Verdict& v) {
  std::ostringstream out;
  if (v.obligations_hold) {
    out << "ObligationsHold (" << v.assignments_checked << " assignments checked)\n";
  } else {
    out << "ObligationFails(" << v.failed_obligation << "): " << witness_text(v.obligation_witness)
        << "\n";
  }
  if (v.conclusion_holds) {
    out << "ConclusionHolds (" << v.inputs << " inputs, " << v.terminating << " terminating)\n";
  } else {
    out << "ConclusionFails: " << witness_text(v.conclusion_witness) << "\n";
  }
  return out.str();
}

std::string render_json(const Verdict& v) {
  auto witness = [](const Witness& w) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [name, value] : w) out[name] = value;
    return out;
  };
  nlohmann::ordered_json out;
  out["obligations"] = {{"hold", v.obligations_hold},
                        {"assignments_checked", v.assignments_checked}};
  if (!v.obligations_hold) {
    out["obligations"]["failed"] = v.failed_obligation;
    out["obligations"]["witness"] = witness(v.obligation_witness);
  }
  out["conclusion"] = {{"holds", v.conclusion_holds},
                       {"inputs", v.inputs},
                       {"terminating", v.terminating}};
  if (!v.conclusion_holds) out["conclusion"]["witness"] = witness(v.conclusion_witness);
  return out.dump(2) + "\n";
}

}  // namespace mfx
