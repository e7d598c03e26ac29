#include "syntax/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace mfx::detail {
namespace {

class Checker {
 public:
  explicit Checker(const Program& program) : program_(program) {}

  // A self-call kept inside a pure expression by a lenient parse.
  const FunDef* self_ = nullptr;

  Type fresh() {
    Type t;
    t.kind = Type::Kind::Meta;
    t.meta = static_cast<int>(subst_.size());
    subst_.push_back(std::nullopt);
    return t;
  }

  Type resolve(const Type& t) const {
    if (t.kind == Type::Kind::Meta) {
      if (subst_[t.meta]) return resolve(*subst_[t.meta]);
      return t;
    }
    Type out = t;
    for (auto& a : out.args) a = resolve(a);
    return out;
  }

  void unify(const Type& a, const Type& b, SourceLoc loc, const char* what) {
    if (!unify_rec(a, b)) {
      throw StaticError(StaticError::Kind::Type, loc,
                        std::string(what) + ": expected " + to_string(resolve(b)) +
                            " but found " + to_string(resolve(a)));
    }
  }

  // Replaces the type variables of a signature with fresh metas.
  Type instantiate(const Type& t, std::map<std::string, Type>& inst) {
    if (t.kind == Type::Kind::Var) {
      auto it = inst.find(t.name);
      if (it == inst.end()) it = inst.emplace(t.name, fresh()).first;
      return it->second;
    }
    Type out = t;
    for (auto& a : out.args) a = instantiate(a, inst);
    return out;
  }

  // Types of a constructor's fields and of the value it builds.
  std::pair<std::vector<Type>, Type> ctor_signature(const std::string& name,
                                                    SourceLoc loc) {
    if (name == "[]") return {{}, Type::list(fresh())};
    if (name == "#") {
      Type a = fresh();
      return {{a, Type::list(a)}, Type::list(a)};
    }
    if (name == "None") return {{}, Type::option(fresh())};
    if (name == "Some") {
      Type a = fresh();
      return {{a}, Type::option(a)};
    }
    auto info = program_.find_ctor(name);
    if (!info) {
      throw StaticError(StaticError::Kind::Scope, loc,
                        "unknown constructor '" + name + "'");
    }
    std::map<std::string, Type> inst;
    std::vector<Type> args;
    for (const auto& p : info->decl->type_params) {
      args.push_back(instantiate(Type::var(p), inst));
    }
    std::vector<Type> fields;
    for (const auto& f : info->ctor->fields) fields.push_back(instantiate(f, inst));
    return {fields, Type::con(info->decl->name, args)};
  }

  Type infer(const Term& t, const std::map<std::string, Type>& env) {
    return std::visit(
        [&](const auto& n) -> Type {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Term::Var>) {
            auto it = env.find(n.name);
            if (it == env.end()) {
              throw StaticError(StaticError::Kind::Scope, t.loc,
                                "unbound variable '" + n.name + "'");
            }
            return it->second;
          } else if constexpr (std::is_same_v<N, Term::NatLit>) {
            return Type::nat();
          } else if constexpr (std::is_same_v<N, Term::BoolLit>) {
            return Type::boolean();
          } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
            return Type::unit();
          } else if constexpr (std::is_same_v<N, Term::RefLit>) {
            return Type::ref(fresh());
          } else if constexpr (std::is_same_v<N, Term::Ctor>) {
            auto [fields, result] = ctor_signature(n.name, t.loc);
            if (fields.size() != n.args.size()) {
              throw StaticError(StaticError::Kind::Scope, t.loc,
                                "constructor '" + n.name + "' expects " +
                                    std::to_string(fields.size()) + " argument(s)");
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
              unify(infer(*n.args[i], env), fields[i], n.args[i]->loc,
                    "constructor argument");
            }
            return result;
          } else if constexpr (std::is_same_v<N, Term::Call>) {
            const PureDef* def = program_.find_pure(n.fun);
            if (!def && self_ && n.fun == self_->name) {
              if (self_->params.size() != n.args.size()) {
                throw StaticError(StaticError::Kind::Scope, t.loc,
                                  "'" + n.fun + "' expects " +
                                      std::to_string(self_->params.size()) + " argument(s)");
              }
              for (std::size_t i = 0; i < n.args.size(); ++i) {
                unify(infer(*n.args[i], env), self_->params[i].type, n.args[i]->loc, "argument");
              }
              return self_->result_type;
            }
            if (!def) {
              throw StaticError(StaticError::Kind::Monad, t.loc,
                                "'" + n.fun + "' cannot be called in a pure expression");
            }
            if (def->params.size() != n.args.size()) {
              throw StaticError(StaticError::Kind::Scope, t.loc,
                                "'" + n.fun + "' expects " +
                                    std::to_string(def->params.size()) + " argument(s)");
            }
            std::map<std::string, Type> inst;
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              unify(infer(*n.args[i], env), instantiate(def->params[i].type, inst),
                    n.args[i]->loc, "argument");
            }
            return instantiate(def->result_type, inst);
          } else if constexpr (std::is_same_v<N, Term::Binary>) {
            Type l = infer(*n.lhs, env);
            Type r = infer(*n.rhs, env);
            switch (n.op) {
              case BinOp::Add:
              case BinOp::Sub:
              case BinOp::Div:
              case BinOp::Mod:
                unify(l, Type::nat(), n.lhs->loc, "arithmetic operand");
                unify(r, Type::nat(), n.rhs->loc, "arithmetic operand");
                return Type::nat();
              case BinOp::Lt:
                unify(l, Type::nat(), n.lhs->loc, "comparison operand");
                unify(r, Type::nat(), n.rhs->loc, "comparison operand");
                return Type::boolean();
              case BinOp::Eq:
              case BinOp::Ne:
                unify(r, l, n.rhs->loc, "equality operand");
                return Type::boolean();
              default:
                unify(l, Type::boolean(), n.lhs->loc, "boolean operand");
                unify(r, Type::boolean(), n.rhs->loc, "boolean operand");
                return Type::boolean();
            }
          } else if constexpr (std::is_same_v<N, Term::Not>) {
            unify(infer(*n.arg, env), Type::boolean(), n.arg->loc, "negation");
            return Type::boolean();
          } else {
            throw StaticError(StaticError::Kind::Syntax, t.loc,
                              "tuples and 'matches' are not part of the DSL");
          }
        },
        t.node);
  }

  Type infer(const Expr& e, std::map<std::string, Type>& env, const FunDef& fun,
             std::map<std::string, Type>& locals) {
    return std::visit(
        [&](const auto& n) -> Type {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Expr::Return>) {
            return infer(*n.value, env);
          } else if constexpr (std::is_same_v<N, Expr::Bind>) {
            Type bound = infer(*n.bound, env, fun, locals);
            locals[n.var] = bound;
            auto saved = env;
            env[n.var] = bound;
            Type body = infer(*n.body, env, fun, locals);
            env = std::move(saved);
            return body;
          } else if constexpr (std::is_same_v<N, Expr::If>) {
            unify(infer(*n.cond, env), Type::boolean(), n.cond->loc, "condition");
            Type a = infer(*n.then_branch, env, fun, locals);
            Type b = infer(*n.else_branch, env, fun, locals);
            unify(b, a, n.else_branch->loc, "else branch");
            return a;
          } else if constexpr (std::is_same_v<N, Expr::Case>) {
            return infer_case(e, n, env, fun, locals);
          } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
            check_args(n.args, fun.params, env, e.loc, nullptr);
            return fun.result_type;
          } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
            const FunDef* callee = program_.find_fun(n.fun);
            if (!callee) {
              throw StaticError(StaticError::Kind::Scope, e.loc,
                                "unknown function '" + n.fun + "'");
            }
            std::map<std::string, Type> inst;
            check_args(n.args, callee->params, env, e.loc, &inst);
            return instantiate(callee->result_type, inst);
          } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
            return Type::ref(infer(*n.value, env));
          } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
            Type cell = fresh();
            unify(infer(*n.ref, env), Type::ref(cell), n.ref->loc, "dereference");
            return cell;
          } else {
            Type cell = infer(*n.value, env);
            unify(infer(*n.ref, env), Type::ref(cell), n.ref->loc, "assignment");
            return Type::unit();
          }
        },
        e.node);
  }

  void check_args(const std::vector<TermPtr>& args, const std::vector<Param>& params,
                  const std::map<std::string, Type>& env, SourceLoc loc,
                  std::map<std::string, Type>* inst) {
    if (args.size() != params.size()) {
      throw StaticError(StaticError::Kind::Scope, loc,
                        "expected " + std::to_string(params.size()) +
                            " argument(s) but got " + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      Type expected = inst ? instantiate(params[i].type, *inst) : params[i].type;
      unify(infer(*args[i], env), expected, args[i]->loc, "argument");
    }
  }

  Type infer_case(const Expr& e, const Expr::Case& c, std::map<std::string, Type>& env,
                  const FunDef& fun, std::map<std::string, Type>& locals) {
    Type scrut = infer(*c.scrutinee, env);
    std::optional<Type> result;
    std::set<std::string> seen;
    for (const auto& br : c.branches) {
      if (!seen.insert(br.ctor).second) {
        throw StaticError(StaticError::Kind::Type, br.body->loc,
                          "duplicate branch for constructor '" + br.ctor + "'");
      }
      auto [fields, built] = ctor_signature(br.ctor, e.loc);
      if (fields.size() != br.vars.size()) {
        throw StaticError(StaticError::Kind::Scope, e.loc,
                          "constructor '" + br.ctor + "' expects " +
                              std::to_string(fields.size()) + " pattern variable(s)");
      }
      unify(built, scrut, c.scrutinee->loc, "case pattern");
      auto saved = env;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        env[br.vars[i]] = fields[i];
        locals[br.vars[i]] = fields[i];
      }
      Type t = infer(*br.body, env, fun, locals);
      env = std::move(saved);
      if (result) {
        unify(t, *result, br.body->loc, "case branch");
      } else {
        result = t;
      }
    }
    Type s = resolve(scrut);
    for (const auto& name : constructors_of(s)) {
      if (!seen.count(name)) {
        throw StaticError(StaticError::Kind::Type, e.loc,
                          "non-exhaustive case: missing constructor '" + name + "'");
      }
    }
    return *result;
  }

  std::vector<std::string> constructors_of(const Type& t) const {
    if (t.is("list")) return {"[]", "#"};
    if (t.is("option")) return {"None", "Some"};
    std::vector<std::string> out;
    if (t.kind == Type::Kind::Con) {
      if (const DataDecl* d = program_.find_data(t.name)) {
        for (const auto& c : d->constructors) out.push_back(c.name);
      }
    }
    return out;
  }

  // Unresolved metas (e.g. the element type of an unused empty list) default
  // to unit so that every recorded binder has a closed type.
  Type finish(const Type& t) const {
    Type r = resolve(t);
    std::function<void(Type&)> go = [&](Type& x) {
      if (x.kind == Type::Kind::Meta) {
        x = Type::unit();
        return;
      }
      for (auto& a : x.args) go(a);
    };
    go(r);
    return r;
  }

 private:
  bool occurs(int meta, const Type& t) const {
    Type r = resolve(t);
    if (r.kind == Type::Kind::Meta) return r.meta == meta;
    for (const auto& a : r.args) {
      if (occurs(meta, a)) return true;
    }
    return false;
  }

  bool unify_rec(const Type& a0, const Type& b0) {
    Type a = resolve(a0);
    Type b = resolve(b0);
    if (a.kind == Type::Kind::Meta) {
      if (b.kind == Type::Kind::Meta && b.meta == a.meta) return true;
      if (occurs(a.meta, b)) return false;
      subst_[a.meta] = b;
      return true;
    }
    if (b.kind == Type::Kind::Meta) return unify_rec(b, a);
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!unify_rec(a.args[i], b.args[i])) return false;
    }
    return true;
  }

  const Program& program_;
  std::vector<std::optional<Type>> subst_;
};

}  // namespace

void typecheck_fundef(const Program& program, FunDef& fun) {
  Checker checker(program);
  checker.self_ = &fun;
  std::map<std::string, Type> env;
  for (const auto& p : fun.params) env[p.name] = p.type;
  std::map<std::string, Type> locals;
  Type body = checker.infer(*fun.body, env, fun, locals);
  checker.unify(body, fun.result_type, fun.body->loc, "function result");
  fun.local_types.clear();
  for (const auto& [name, t] : locals) fun.local_types[name] = checker.finish(t);
}

void typecheck_puredef(const Program& program, const PureDef& def) {
  Checker checker(program);
  std::map<std::string, Type> env;
  for (const auto& p : def.params) env[p.name] = p.type;
  Type body = checker.infer(*def.body, env);
  checker.unify(body, def.result_type, def.body->loc, "function result");
}

void validate_type(const Program& program, const Type& t, SourceLoc loc,
                   const std::vector<std::string>* type_params) {
  switch (t.kind) {
    case Type::Kind::Var:
      if (type_params &&
          std::find(type_params->begin(), type_params->end(), t.name) ==
              type_params->end()) {
        throw StaticError(StaticError::Kind::Scope, loc,
                          "type variable " + t.name + " is not a parameter of the datatype");
      }
      return;
    case Type::Kind::Meta:
      return;
    case Type::Kind::Con: {
      std::size_t expected = 0;
      if (t.name == "list" || t.name == "option" || t.name == "ref") {
        expected = 1;
      } else if (const DataDecl* d = program.find_data(t.name)) {
        expected = d->type_params.size();
      } else if (!(t.name == "nat" || t.name == "bool" || t.name == "unit" ||
                   t.name == "heap")) {
        throw StaticError(StaticError::Kind::Scope, loc, "unknown type '" + t.name + "'");
      }
      if (t.args.size() != expected) {
        throw StaticError(StaticError::Kind::Scope, loc,
                          "type '" + t.name + "' expects " + std::to_string(expected) +
                              " argument(s)");
      }
      for (const auto& a : t.args) validate_type(program, a, loc, type_params);
    }
  }
}

std::optional<std::size_t> ctor_arity(const Program& program, std::string_view name) {
  if (name == "[]" || name == "None") return 0;
  if (name == "Some") return 1;
  if (name == "#") return 2;
  if (auto info = program.find_ctor(name)) return info->ctor->fields.size();
  return std::nullopt;
}

}  // namespace mfx::detail
