#include <deque>
#include <set>

#include "mfx/audit.hpp"
#include "mfx/evaluator.hpp"

namespace mfx {

bool LogicValue::operator==(const LogicValue& o) const {
  if (node.index() != o.node.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using N = std::decay_t<decltype(a)>;
        const auto& b = std::get<N>(o.node);
        if constexpr (std::is_same_v<N, Tuple>) {
          return a.elems == b.elems;
        } else if constexpr (std::is_same_v<N, FunRef>) {
          return a.name == b.name;
        } else {
          return a == b;
        }
      },
      node);
}

std::string render(const LogicValue& v) {
  return std::visit(
      [](const auto& a) -> std::string {
        using N = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<N, LogicValue::Tuple>) {
          std::string out = "(";
          for (std::size_t i = 0; i < a.elems.size(); ++i) {
            if (i) out += ", ";
            out += render(a.elems[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<N, LogicValue::FunRef>) {
          return a.name;
        } else {
          return render(a);
        }
      },
      v.node);
}

bool occurs_in(const Heap& h, RefId r1, RefId r2) {
  std::set<RefId> seen{r2};
  std::deque<RefId> todo{r2};
  while (!todo.empty()) {
    RefId cur = todo.front();
    todo.pop_front();
    if (cur == r1) return true;
    auto it = h.store.find(cur);
    if (it == h.store.end()) continue;
    std::vector<RefId> next;
    collect_refs(it->second, next);
    for (RefId r : next) {
      if (seen.insert(r).second) todo.push_back(r);
    }
  }
  return false;
}

std::optional<std::vector<Value>> heap_list(const Heap& h, const Value& p) {
  std::vector<Value> out;
  std::set<RefId> seen;
  const Value* cur = &p;
  while (true) {
    const auto* c = cur->as<Value::CtorV>();
    if (!c) throw EvalError("heap_list expects a node, got " + render(*cur));
    if (c->args.empty()) return out;
    if (c->args.size() != 2 || !c->args[1].as<Value::RefV>()) {
      throw EvalError("heap_list expects nodes of the form C value ref");
    }
    out.push_back(c->args[0]);
    RefId r = c->args[1].as<Value::RefV>()->id;
    if (!seen.insert(r).second) return std::nullopt;
    auto it = h.store.find(r);
    if (it == h.store.end()) throw Undefined("heap_list follows unallocated ref" + std::to_string(r));
    cur = &it->second;
  }
}

namespace {

constexpr std::uint64_t kOrbitCap = 100000;

class Interp {
 public:
  Interp(const Program& program, std::uint64_t fuel_cap) : program_(program), fuel_(fuel_cap) {}

  LogicValue eval(const Term& t, const LogicEnv& env) {
    return std::visit(
        [&](const auto& n) -> LogicValue {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Term::Var>) {
            auto it = env.find(n.name);
            if (it != env.end()) return it->second;
            if (program_.find_pure(n.name)) return {LogicValue::FunRef{n.name}};
            throw EvalError("unbound variable '" + n.name + "'");
          } else if constexpr (std::is_same_v<N, Term::NatLit>) {
            return wrap(Value::nat(n.value));
          } else if constexpr (std::is_same_v<N, Term::BoolLit>) {
            return wrap(Value::boolean(n.value));
          } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
            return wrap(Value::unit());
          } else if constexpr (std::is_same_v<N, Term::RefLit>) {
            return wrap(Value::ref(n.id));
          } else if constexpr (std::is_same_v<N, Term::Ctor>) {
            std::vector<Value> args;
            for (const auto& a : n.args) args.push_back(value(eval(*a, env)));
            return wrap(build_ctor(n.name, std::move(args)));
          } else if constexpr (std::is_same_v<N, Term::Call>) {
            return call(n.fun, n.args, env);
          } else if constexpr (std::is_same_v<N, Term::Binary>) {
            return binary(n.op, *n.lhs, *n.rhs, env);
          } else if constexpr (std::is_same_v<N, Term::Not>) {
            return wrap(Value::boolean(!truth(eval(*n.arg, env))));
          } else if constexpr (std::is_same_v<N, Term::Tuple>) {
            LogicValue::Tuple out;
            for (const auto& e : n.elems) out.elems.push_back(eval(*e, env));
            return {std::move(out)};
          } else if constexpr (std::is_same_v<N, Term::Matches>) {
            return wrap(Value::boolean(matches(value(eval(*n.arg, env)), *n.pattern)));
          }
        },
        t.node);
  }

  static LogicValue wrap(Value v) { return {std::move(v)}; }

  static const Value& value(const LogicValue& v) {
    const auto* x = std::get_if<Value>(&v.node);
    if (!x) throw EvalError("expected a value, got " + render(v));
    return *x;
  }

  static bool truth(const LogicValue& v) {
    const auto* b = value(v).as<bool>();
    if (!b) throw EvalError("expected a boolean, got " + render(v));
    return *b;
  }

 private:
  static const Heap& heap(const LogicValue& v) {
    const auto* h = std::get_if<Heap>(&v.node);
    if (!h) throw EvalError("expected a heap, got " + render(v));
    return *h;
  }

  static RefId ref(const LogicValue& v) {
    const auto* r = value(v).as<Value::RefV>();
    if (!r) throw EvalError("expected a reference, got " + render(v));
    return r->id;
  }

  static const Nat& nat(const Value& v) {
    const auto* n = v.as<Nat>();
    if (!n) throw EvalError("expected a natural number, got " + render(v));
    return *n;
  }

  static const std::vector<Value>& list(const Value& v) {
    const auto* l = v.as<Value::ListV>();
    if (!l) throw EvalError("expected a list, got " + render(v));
    return l->elems;
  }

  static Value build_ctor(const std::string& name, std::vector<Value> args) {
    if (name == "[]") return Value::list({});
    if (name == "None") return Value::none();
    if (name == "Some") return Value::some(std::move(args.at(0)));
    if (name == "#") {
      std::vector<Value> elems{std::move(args.at(0))};
      const auto& tail = list(args.at(1));
      elems.insert(elems.end(), tail.begin(), tail.end());
      return Value::list(std::move(elems));
    }
    return Value::ctor(name, std::move(args));
  }

  // Pattern variables (any name, including `_`) match anything.
  static bool matches(const Value& v, const Term& p) {
    if (p.as<Term::Var>()) return true;
    if (const auto* c = p.as<Term::Ctor>()) {
      if (c->name == "[]") return v.as<Value::ListV>() && list(v).empty();
      if (c->name == "#") {
        const auto* l = v.as<Value::ListV>();
        if (!l || l->elems.empty()) return false;
        Value tail = Value::list({l->elems.begin() + 1, l->elems.end()});
        return matches(l->elems[0], *c->args[0]) && matches(tail, *c->args[1]);
      }
      if (c->name == "None") return v.as<Value::OptionV>() && v.as<Value::OptionV>()->inner.empty();
      if (c->name == "Some") {
        const auto* o = v.as<Value::OptionV>();
        return o && o->inner.size() == 1 && matches(o->inner[0], *c->args[0]);
      }
      const auto* cv = v.as<Value::CtorV>();
      if (!cv || cv->name != c->name || cv->args.size() != c->args.size()) return false;
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        if (!matches(cv->args[i], *c->args[i])) return false;
      }
      return true;
    }
    if (const auto* n = p.as<Term::NatLit>()) return v.as<Nat>() && *v.as<Nat>() == n->value;
    if (const auto* b = p.as<Term::BoolLit>()) return v.as<bool>() && *v.as<bool>() == b->value;
    if (p.as<Term::UnitLit>()) return v.as<Value::Unit>() != nullptr;
    if (const auto* r = p.as<Term::RefLit>()) return v.as<Value::RefV>() && v.as<Value::RefV>()->id == r->id;
    throw EvalError("unsupported pattern " + pretty(p));
  }

  const PureDef& pure_fun(const LogicValue& v, std::size_t arity) const {
    const auto* f = std::get_if<LogicValue::FunRef>(&v.node);
    if (!f) throw EvalError("expected a function name, got " + render(v));
    const PureDef* def = program_.find_pure(f->name);
    if (!def || def->params.size() != arity) {
      throw EvalError("'" + f->name + "' is not a pure function of arity " + std::to_string(arity));
    }
    return *def;
  }

  LogicValue call(const std::string& fun, const std::vector<TermPtr>& arg_terms, const LogicEnv& env) {
    std::vector<LogicValue> args;
    for (const auto& a : arg_terms) args.push_back(eval(*a, env));
    auto need = [&](std::size_t k) {
      if (args.size() != k) {
        throw EvalError("'" + fun + "' expects " + std::to_string(k) + " argument(s)");
      }
    };
    if (fun == "get_ref") {
      need(2);
      const Heap& h = heap(args[1]);
      RefId r = ref(args[0]);
      auto it = h.store.find(r);
      if (it == h.store.end()) throw Undefined("get_ref of unallocated ref" + std::to_string(r));
      return wrap(it->second);
    }
    if (fun == "set_ref") {
      need(3);
      const Heap& h = heap(args[2]);
      RefId r = ref(args[0]);
      if (!h.store.count(r)) throw Undefined("set_ref of unallocated ref" + std::to_string(r));
      return {heap_set(h, r, value(args[1]))};
    }
    if (fun == "new_ref_with") {
      need(2);
      auto [r, h] = heap_alloc(heap(args[1]), value(args[0]));
      return {LogicValue::Tuple{{wrap(std::move(r)), LogicValue{std::move(h)}}}};
    }
    if (fun == "occurs_in") {
      need(3);
      return wrap(Value::boolean(occurs_in(heap(args[0]), ref(args[1]), ref(args[2]))));
    }
    if (fun == "heap_list") {
      need(2);
      auto l = heap_list(heap(args[0]), value(args[1]));
      return wrap(l ? Value::some(Value::list(std::move(*l))) : Value::none());
    }
    if (fun == "filter") {
      need(2);
      const PureDef& p = pure_fun(args[0], 1);
      std::vector<Value> out;
      for (const auto& x : list(value(args[1]))) {
        Value keep = call_pure(program_, p, {x});
        if (keep.as<bool>() && *keep.as<bool>()) out.push_back(x);
      }
      return wrap(Value::list(std::move(out)));
    }
    if (fun == "orbit") {
      need(2);
      const PureDef& f = pure_fun(args[0], 1);
      std::vector<Value> out;
      Value cur = value(args[1]);
      while (nat(cur) != 0) {
        if (out.size() >= kOrbitCap) throw Undefined("orbit does not reach 0");
        out.push_back(cur);
        cur = call_pure(program_, f, {cur});
      }
      return wrap(Value::list(std::move(out)));
    }
    if (fun == "length") {
      need(1);
      return wrap(Value::nat(Nat(list(value(args[0])).size())));
    }
    std::vector<Value> vals;
    for (const auto& a : args) vals.push_back(value(a));
    if (const PureDef* def = program_.find_pure(fun)) {
      need(def->params.size());
      return wrap(call_pure(program_, *def, std::move(vals)));
    }
    if (const FunDef* def = program_.find_fun(fun); def && def->monad == Monad::Option) {
      LfpResult r = run_lfp(program_, fun, vals, Heap{}, fuel_);
      const auto* o = std::get_if<Outcome>(&r);
      return wrap(o && !o->is_bottom() ? Value::some(o->value) : Value::none());
    }
    throw EvalError("'" + fun + "' cannot be evaluated here");
  }

  LogicValue binary(BinOp op, const Term& l, const Term& r, const LogicEnv& env) {
    switch (op) {
      case BinOp::And:
        return wrap(Value::boolean(truth(eval(l, env)) && truth(eval(r, env))));
      case BinOp::Or:
        return wrap(Value::boolean(truth(eval(l, env)) || truth(eval(r, env))));
      case BinOp::Implies:
        return wrap(Value::boolean(!truth(eval(l, env)) || truth(eval(r, env))));
      case BinOp::Eq:
        return wrap(Value::boolean(eval(l, env) == eval(r, env)));
      case BinOp::Ne:
        return wrap(Value::boolean(!(eval(l, env) == eval(r, env))));
      default:
        break;
    }
    const Nat& a = nat(value(eval(l, env)));
    const Nat& b = nat(value(eval(r, env)));
    switch (op) {
      case BinOp::Add: return wrap(Value::nat(a + b));
      case BinOp::Sub: return wrap(Value::nat(a > b ? Nat(a - b) : Nat(0)));
      case BinOp::Div: return wrap(Value::nat(b == 0 ? Nat(0) : Nat(a / b)));
      case BinOp::Mod: return wrap(Value::nat(b == 0 ? Nat(0) : Nat(a % b)));
      case BinOp::Lt: return wrap(Value::boolean(a < b));
      default: break;
    }
    throw EvalError("unsupported operator");
  }

  const Program& program_;
  std::uint64_t fuel_;
};

}  // namespace

LogicValue eval_logic(const Program& program, const Term& t, const LogicEnv& env,
                      std::uint64_t fuel_cap) {
  return Interp(program, fuel_cap).eval(t, env);
}

}  // namespace mfx
