#include "mfx/evaluator.hpp"

#include <cstdlib>
#include <set>

namespace mfx {

// ---------------------------------------------------------------------------
// Pure expressions
// ---------------------------------------------------------------------------

namespace {

const Nat& expect_nat(const Value& v) {
  const Nat* n = v.as<Nat>();
  if (!n) throw EvalError("expected a natural number, got " + render(v));
  return *n;
}

bool expect_bool(const Value& v) {
  const bool* b = v.as<bool>();
  if (!b) throw EvalError("expected a boolean, got " + render(v));
  return *b;
}

}  // namespace

Value eval_pure(const Program& program, const Term& t, const Env& env) {
  return std::visit(
      [&](const auto& n) -> Value {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          auto it = env.find(n.name);
          if (it == env.end()) throw EvalError("unbound variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<N, Term::NatLit>) {
          return Value::nat(n.value);
        } else if constexpr (std::is_same_v<N, Term::BoolLit>) {
          return Value::boolean(n.value);
        } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
          return Value::unit();
        } else if constexpr (std::is_same_v<N, Term::RefLit>) {
          return Value::ref(n.id);
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          std::vector<Value> args;
          for (const auto& a : n.args) args.push_back(eval_pure(program, *a, env));
          if (n.name == "[]") return Value::list({});
          if (n.name == "None") return Value::none();
          if (n.name == "Some") return Value::some(std::move(args[0]));
          if (n.name == "#") {
            const auto* tail = args[1].as<Value::ListV>();
            if (!tail) throw EvalError("'#' expects a list tail, got " + render(args[1]));
            std::vector<Value> elems;
            elems.reserve(tail->elems.size() + 1);
            elems.push_back(std::move(args[0]));
            elems.insert(elems.end(), tail->elems.begin(), tail->elems.end());
            return Value::list(std::move(elems));
          }
          return Value::ctor(n.name, std::move(args));
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          const PureDef* def = program.find_pure(n.fun);
          if (!def) throw EvalError("'" + n.fun + "' is not a pure function");
          std::vector<Value> args;
          for (const auto& a : n.args) args.push_back(eval_pure(program, *a, env));
          return call_pure(program, *def, std::move(args));
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          Value l = eval_pure(program, *n.lhs, env);
          switch (n.op) {
            case BinOp::And:
              if (!expect_bool(l)) return Value::boolean(false);
              return Value::boolean(expect_bool(eval_pure(program, *n.rhs, env)));
            case BinOp::Or:
              if (expect_bool(l)) return Value::boolean(true);
              return Value::boolean(expect_bool(eval_pure(program, *n.rhs, env)));
            case BinOp::Implies:
              if (!expect_bool(l)) return Value::boolean(true);
              return Value::boolean(expect_bool(eval_pure(program, *n.rhs, env)));
            default:
              break;
          }
          Value r = eval_pure(program, *n.rhs, env);
          switch (n.op) {
            case BinOp::Eq: return Value::boolean(l == r);
            case BinOp::Ne: return Value::boolean(!(l == r));
            default: break;
          }
          const Nat& a = expect_nat(l);
          const Nat& b = expect_nat(r);
          switch (n.op) {
            case BinOp::Add: return Value::nat(a + b);
            case BinOp::Sub: return Value::nat(a > b ? Nat(a - b) : Nat(0));
            case BinOp::Div: return Value::nat(b == 0 ? Nat(0) : Nat(a / b));
            case BinOp::Mod: return Value::nat(b == 0 ? Nat(0) : Nat(a % b));
            case BinOp::Lt: return Value::boolean(a < b);
            default: throw EvalError("unsupported operator");
          }
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return Value::boolean(!expect_bool(eval_pure(program, *n.arg, env)));
        } else {
          throw EvalError("tuples and 'matches' cannot be evaluated as program values");
        }
      },
      t.node);
}

Value call_pure(const Program& program, const PureDef& def, std::vector<Value> args) {
  if (args.size() != def.params.size()) {
    throw EvalError("'" + def.name + "' expects " + std::to_string(def.params.size()) +
                    " argument(s)");
  }
  Env env;
  for (std::size_t i = 0; i < args.size(); ++i) env[def.params[i].name] = std::move(args[i]);
  return eval_pure(program, *def.body, env);
}

// ---------------------------------------------------------------------------
// Argument validation
// ---------------------------------------------------------------------------

namespace {

class ShapeChecker {
 public:
  ShapeChecker(const Program& program, const Heap& h) : program_(program), heap_(h) {}

  void check(const Value& v, const Type& t) {
    if (t.kind != Type::Kind::Con) return;  // type variables accept anything
    auto fail = [&] {
      throw EvalError("value " + render(v) + " does not have type " + to_string(t));
    };
    if (t.is("nat")) {
      if (!v.as<Nat>()) fail();
    } else if (t.is("bool")) {
      if (!v.as<bool>()) fail();
    } else if (t.is("unit")) {
      if (!v.as<Value::Unit>()) fail();
    } else if (t.is("list")) {
      const auto* l = v.as<Value::ListV>();
      if (!l) fail();
      for (const auto& e : l->elems) check(e, t.args[0]);
    } else if (t.is("option")) {
      const auto* o = v.as<Value::OptionV>();
      if (!o) fail();
      for (const auto& e : o->inner) check(e, t.args[0]);
    } else if (t.is("ref")) {
      const auto* r = v.as<Value::RefV>();
      if (!r) fail();
      auto it = heap_.store.find(r->id);
      if (it == heap_.store.end()) {
        throw EvalError("reference ref" + std::to_string(r->id) + " is not allocated");
      }
      if (visited_.insert({r->id, to_string(t)}).second) check(it->second, t.args[0]);
    } else if (const DataDecl* d = program_.find_data(t.name)) {
      const auto* c = v.as<Value::CtorV>();
      if (!c) fail();
      const Constructor* ctor = nullptr;
      for (const auto& k : d->constructors) {
        if (k.name == c->name) ctor = &k;
      }
      if (!ctor || ctor->fields.size() != c->args.size()) fail();
      std::map<std::string, Type> inst;
      for (std::size_t i = 0; i < d->type_params.size(); ++i) inst[d->type_params[i]] = t.args[i];
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        check(c->args[i], substitute(ctor->fields[i], inst));
      }
    } else {
      fail();
    }
  }

 private:
  static Type substitute(const Type& t, const std::map<std::string, Type>& inst) {
    if (t.kind == Type::Kind::Var) {
      auto it = inst.find(t.name);
      return it == inst.end() ? t : it->second;
    }
    Type out = t;
    for (auto& a : out.args) a = substitute(a, inst);
    return out;
  }

  const Program& program_;
  const Heap& heap_;
  std::set<std::pair<RefId, std::string>> visited_;
};

}  // namespace

void check_call(const Program& program, const FunDef& fun, std::span<const Value> args,
                const Heap& h) {
  if (args.size() != fun.params.size()) {
    throw EvalError("'" + fun.name + "' expects " + std::to_string(fun.params.size()) +
                    " argument(s) but got " + std::to_string(args.size()));
  }
  if (fun.monad == Monad::Heap && !heap_well_formed(h)) {
    throw EvalError("heap is not well formed: " + render(h));
  }
  Heap empty;
  ShapeChecker checker(program, fun.monad == Monad::Heap ? h : empty);
  for (std::size_t i = 0; i < args.size(); ++i) checker.check(args[i], fun.params[i].type);
}

// ---------------------------------------------------------------------------
// Computations
// ---------------------------------------------------------------------------

namespace {

struct Step {
  bool bottom = true;
  Value value;
  Heap heap;
};

// Binds pattern variables if `v` is built by constructor `ctor`.
bool match(const Value& v, const CaseBranch& br, Env& env) {
  std::vector<Value> parts;
  if (br.ctor == "[]" || br.ctor == "#") {
    const auto* l = v.as<Value::ListV>();
    if (!l) throw EvalError("case on a non-list value " + render(v));
    if (l->elems.empty() != (br.ctor == "[]")) return false;
    if (!l->elems.empty()) {
      parts.push_back(l->elems.front());
      parts.push_back(Value::list({l->elems.begin() + 1, l->elems.end()}));
    }
  } else if (br.ctor == "None" || br.ctor == "Some") {
    const auto* o = v.as<Value::OptionV>();
    if (!o) throw EvalError("case on a non-option value " + render(v));
    if (o->inner.empty() != (br.ctor == "None")) return false;
    parts = o->inner;
  } else {
    const auto* c = v.as<Value::CtorV>();
    if (!c) throw EvalError("case on a non-constructor value " + render(v));
    if (c->name != br.ctor) return false;
    parts = c->args;
  }
  if (parts.size() != br.vars.size()) throw EvalError("pattern arity mismatch");
  for (std::size_t i = 0; i < parts.size(); ++i) env[br.vars[i]] = std::move(parts[i]);
  return true;
}

class Machine {
 public:
  Machine(const Program& program, const FunDef& fun, const SelfHandler& self,
          std::uint64_t ext_fuel)
      : program_(program), fun_(fun), self_(self), ext_fuel_(ext_fuel) {}

  // Binder names are unique within a definition, so one environment can be
  // extended and shrunk in place.
  Step run(const Expr& e, Env& env, Heap h) {
    return std::visit(
        [&](const auto& n) -> Step {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Expr::Return>) {
            return {false, pure(*n.value, env), std::move(h)};
          } else if constexpr (std::is_same_v<N, Expr::Bind>) {
            Step first = run(*n.bound, env, std::move(h));
            if (first.bottom) return first;
            env[n.var] = std::move(first.value);
            Step rest = run(*n.body, env, std::move(first.heap));
            env.erase(n.var);
            return rest;
          } else if constexpr (std::is_same_v<N, Expr::If>) {
            bool c = expect_bool(pure(*n.cond, env));
            return run(c ? *n.then_branch : *n.else_branch, env, std::move(h));
          } else if constexpr (std::is_same_v<N, Expr::Case>) {
            Value v = pure(*n.scrutinee, env);
            for (const auto& br : n.branches) {
              if (match(v, br, env)) {
                Step s = run(*br.body, env, std::move(h));
                for (const auto& var : br.vars) env.erase(var);
                return s;
              }
            }
            throw EvalError("no case branch matches " + render(v));
          } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
            return finish(self_(args(n.args, env), h));
          } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
            std::vector<Value> a = args(n.args, env);
            LfpResult r = run_lfp(program_, n.fun, a, h, ext_fuel_);
            if (std::holds_alternative<Diverged>(r)) return {};
            Step s = finish(std::get<Outcome>(r));
            if (fun_.monad == Monad::Option) s.heap = std::move(h);
            return s;
          } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
            auto [r, h2] = heap_alloc(h, pure(*n.value, env));
            return {false, std::move(r), std::move(h2)};
          } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
            RefId r = ref_of(pure(*n.ref, env));
            Value v = heap_get(h, r);
            return {false, std::move(v), std::move(h)};
          } else {
            RefId r = ref_of(pure(*n.ref, env));
            Heap h2 = heap_set(h, r, pure(*n.value, env));
            return {false, Value::unit(), std::move(h2)};
          }
        },
        e.node);
  }

 private:
  Value pure(const Term& t, const Env& env) const { return eval_pure(program_, t, env); }

  std::vector<Value> args(const std::vector<TermPtr>& ts, const Env& env) const {
    std::vector<Value> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(pure(*t, env));
    return out;
  }

  static RefId ref_of(const Value& v) {
    const auto* r = v.as<Value::RefV>();
    if (!r) throw EvalError("expected a reference, got " + render(v));
    return r->id;
  }

  static Step finish(Outcome o) {
    if (o.is_bottom()) return {};
    return {false, std::move(o.value), std::move(o.heap)};
  }

  const Program& program_;
  const FunDef& fun_;
  const SelfHandler& self_;
  std::uint64_t ext_fuel_;
};

const FunDef& lookup(const Program& program, const std::string& name) {
  const FunDef* f = program.find_fun(name);
  if (!f) throw EvalError("unknown function '" + name + "'");
  return *f;
}

Outcome eval_unchecked(const Program& program, const FunDef& fun, std::uint64_t fuel,
                       std::uint64_t ext_fuel, std::span<const Value> args, const Heap& h) {
  if (fuel == 0) return Outcome::bottom();
  SelfHandler self = [&](const std::vector<Value>& a, const Heap& h2) {
    return eval_unchecked(program, fun, fuel - 1, ext_fuel, a, h2);
  };
  return unfold_once(program, fun, args, h, self, ext_fuel);
}

}  // namespace

Outcome unfold_once(const Program& program, const FunDef& fun, std::span<const Value> args,
                    const Heap& h, const SelfHandler& self, std::uint64_t ext_fuel) {
  Env env;
  for (std::size_t i = 0; i < fun.params.size() && i < args.size(); ++i) {
    env[fun.params[i].name] = args[i];
  }
  Machine m(program, fun, self, ext_fuel);
  // Option computations never look at the heap they are given.
  Step s = m.run(*fun.body, env, fun.monad == Monad::Heap ? h : Heap{});
  if (s.bottom) return Outcome::bottom();
  if (fun.monad == Monad::Option) return Outcome::ok_pure(std::move(s.value));
  return Outcome::ok(std::move(s.value), std::move(s.heap));
}

Outcome eval(const Approximant& a, std::span<const Value> args, const Heap& h) {
  const FunDef& fun = lookup(*a.program, a.fun_name);
  check_call(*a.program, fun, args, h);
  return eval_unchecked(*a.program, fun, a.fuel, a.ext_fuel, args, h);
}

Chain approx_chain(const Program& program, const std::string& fun_name,
                   std::span<const Value> args, const Heap& h, std::uint64_t max_fuel) {
  const FunDef& fun = lookup(program, fun_name);
  check_call(program, fun, args, h);
  Chain c;
  for (std::uint64_t i = 0; i <= max_fuel; ++i) {
    c.elems.push_back(eval_unchecked(program, fun, i, max_fuel, args, h));
    if (i > 0 && !outcome_le(c.elems[i - 1], c.elems[i])) {
      throw ChainViolation(i - 1, render(c.elems[i - 1]) + " is not below " + render(c.elems[i]));
    }
  }
  return c;
}

LfpResult run_lfp(const Program& program, const std::string& fun_name,
                  std::span<const Value> args, const Heap& h, std::uint64_t fuel_cap) {
  const FunDef& fun = lookup(program, fun_name);
  check_call(program, fun, args, h);
  // The chain is flat and monotone, so its last represented element is its
  // lub; there is no need to materialize the prefix.
  Outcome o = eval_unchecked(program, fun, fuel_cap, fuel_cap, args, h);
  if (o.is_bottom()) return Diverged{fuel_cap};
  return o;
}

bool in_semantics(const Program& program, const std::string& fun_name,
                  std::span<const Value> args, const Heap& h, const Heap& h2, const Value& y,
                  std::uint64_t fuel_cap) {
  LfpResult r = run_lfp(program, fun_name, args, h, fuel_cap);
  const auto* o = std::get_if<Outcome>(&r);
  if (!o) return false;
  if (o->kind == Outcome::Kind::OkPure) return o->value == y;
  return o->value == y && o->heap == h2;
}

std::string render(const LfpResult& r) {
  if (const auto* d = std::get_if<Diverged>(&r)) {
    return "Diverged(" + std::to_string(d->fuel_cap) + ")";
  }
  return render(std::get<Outcome>(r));
}

std::uint64_t default_fuel_cap() {
  if (const char* env = std::getenv("MFX_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
  }
  return kDefaultFuelCap;
}

}  // namespace mfx
