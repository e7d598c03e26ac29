#include "json.hpp"

#include "induction/terms.hpp"

namespace mfx {

namespace {

using json = nlohmann::ordered_json;

const std::map<std::string, BinOp>& binops() {
  static const std::map<std::string, BinOp> table = [] {
    std::map<std::string, BinOp> m;
    for (BinOp op : {BinOp::Add, BinOp::Sub, BinOp::Div, BinOp::Mod, BinOp::Eq, BinOp::Ne,
                     BinOp::Lt, BinOp::And, BinOp::Or, BinOp::Implies}) {
      m.emplace(std::string(to_string(op)), op);
    }
    return m;
  }();
  return table;
}

json term_json(const TermPtr& t);

json terms_json(const std::vector<TermPtr>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(term_json(t));
  return out;
}

json term_json(const TermPtr& t) {
  if (!t) return nullptr;
  return std::visit(
      [&](const auto& n) -> json {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Term::Var>) {
          return {{"tag", "var"}, {"name", n.name}};
        } else if constexpr (std::is_same_v<N, Term::NatLit>) {
          return {{"tag", "nat"}, {"value", n.value.str()}};
        } else if constexpr (std::is_same_v<N, Term::BoolLit>) {
          return {{"tag", "bool"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<N, Term::UnitLit>) {
          return {{"tag", "unit"}};
        } else if constexpr (std::is_same_v<N, Term::RefLit>) {
          return {{"tag", "ref"}, {"id", n.id}};
        } else if constexpr (std::is_same_v<N, Term::Ctor>) {
          return {{"tag", "ctor"}, {"name", n.name}, {"args", terms_json(n.args)}};
        } else if constexpr (std::is_same_v<N, Term::Call>) {
          return {{"tag", "call"}, {"fun", n.fun}, {"args", terms_json(n.args)}};
        } else if constexpr (std::is_same_v<N, Term::Binary>) {
          return {{"tag", "binop"},
                  {"op", std::string(to_string(n.op))},
                  {"lhs", term_json(n.lhs)},
                  {"rhs", term_json(n.rhs)}};
        } else if constexpr (std::is_same_v<N, Term::Not>) {
          return {{"tag", "not"}, {"arg", term_json(n.arg)}};
        } else if constexpr (std::is_same_v<N, Term::Tuple>) {
          return {{"tag", "tuple"}, {"elems", terms_json(n.elems)}};
        } else if constexpr (std::is_same_v<N, Term::Matches>) {
          return {{"tag", "matches"}, {"arg", term_json(n.arg)}, {"pattern", term_json(n.pattern)}};
        }
      },
      t->node);
}

json expr_json(const ExprPtr& e) {
  if (!e) return nullptr;
  return std::visit(
      [&](const auto& n) -> json {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Return>) {
          return {{"tag", "return"}, {"value", term_json(n.value)}};
        } else if constexpr (std::is_same_v<N, Expr::Bind>) {
          return {{"tag", "bind"},
                  {"var", n.var},
                  {"bound", expr_json(n.bound)},
                  {"body", expr_json(n.body)}};
        } else if constexpr (std::is_same_v<N, Expr::If>) {
          return {{"tag", "if"},
                  {"cond", term_json(n.cond)},
                  {"then", expr_json(n.then_branch)},
                  {"else", expr_json(n.else_branch)}};
        } else if constexpr (std::is_same_v<N, Expr::Case>) {
          json branches = json::array();
          for (const auto& b : n.branches) {
            branches.push_back({{"ctor", b.ctor}, {"vars", b.vars}, {"body", expr_json(b.body)}});
          }
          return {{"tag", "case"}, {"scrutinee", term_json(n.scrutinee)}, {"branches", branches}};
        } else if constexpr (std::is_same_v<N, Expr::SelfCall>) {
          return {{"tag", "self_call"}, {"args", terms_json(n.args)}};
        } else if constexpr (std::is_same_v<N, Expr::ExtCall>) {
          return {{"tag", "ext_call"}, {"fun", n.fun}, {"args", terms_json(n.args)}};
        } else if constexpr (std::is_same_v<N, Expr::RefNew>) {
          return {{"tag", "ref_new"}, {"value", term_json(n.value)}};
        } else if constexpr (std::is_same_v<N, Expr::RefGet>) {
          return {{"tag", "ref_get"}, {"ref", term_json(n.ref)}};
        } else if constexpr (std::is_same_v<N, Expr::RefSet>) {
          return {{"tag", "ref_set"}, {"ref", term_json(n.ref)}, {"value", term_json(n.value)}};
        }
      },
      e->node);
}

json premise_json(const Premise& p) {
  json out = {{"kind", std::string(to_string(p.kind))}};
  if (p.lhs) out["lhs"] = term_json(p.lhs);
  if (p.rhs) out["rhs"] = term_json(p.rhs);
  if (p.term) out["term"] = term_json(p.term);
  if (!p.binders.empty()) out["binders"] = p.binders;
  if (p.body) out["body"] = expr_json(p.body);
  return out;
}

json vars_json(const std::vector<TypedVar>& vars) {
  json out = json::array();
  for (const auto& v : vars) out.push_back({{"name", v.name}, {"type", to_string(v.type)}});
  return out;
}

// Reading ---------------------------------------------------------------------

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed rule JSON: " + what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

TermPtr read_term(const json& j);

std::vector<TermPtr> read_terms(const json& j) {
  if (!j.is_array()) malformed("expected an array of terms");
  std::vector<TermPtr> out;
  for (const auto& x : j) out.push_back(read_term(x));
  return out;
}

TermPtr read_term(const json& j) {
  if (j.is_null()) return nullptr;
  std::string tag = field(j, "tag").get<std::string>();
  if (tag == "var") return term::var(field(j, "name").get<std::string>());
  if (tag == "nat") return term::nat(Nat(field(j, "value").get<std::string>()));
  if (tag == "bool") return term::boolean(field(j, "value").get<bool>());
  if (tag == "unit") return term::unit();
  if (tag == "ref") return term::ref(field(j, "id").get<RefId>());
  if (tag == "ctor") return term::ctor(field(j, "name").get<std::string>(), read_terms(field(j, "args")));
  if (tag == "call") return term::call(field(j, "fun").get<std::string>(), read_terms(field(j, "args")));
  if (tag == "binop") {
    auto it = binops().find(field(j, "op").get<std::string>());
    if (it == binops().end()) malformed("unknown operator");
    return term::binary(it->second, read_term(field(j, "lhs")), read_term(field(j, "rhs")));
  }
  if (tag == "not") return term::negate(read_term(field(j, "arg")));
  if (tag == "tuple") return term::tuple(read_terms(field(j, "elems")));
  if (tag == "matches") return term::matches(read_term(field(j, "arg")), read_term(field(j, "pattern")));
  malformed("unknown term tag '" + tag + "'");
}

ExprPtr read_expr(const json& j) {
  if (j.is_null()) return nullptr;
  std::string tag = field(j, "tag").get<std::string>();
  if (tag == "return") return expr::ret(read_term(field(j, "value")));
  if (tag == "bind") {
    return expr::bind(field(j, "var").get<std::string>(), read_expr(field(j, "bound")),
                      read_expr(field(j, "body")));
  }
  if (tag == "if") {
    return expr::if_(read_term(field(j, "cond")), read_expr(field(j, "then")),
                     read_expr(field(j, "else")));
  }
  if (tag == "case") {
    std::vector<CaseBranch> branches;
    for (const auto& b : field(j, "branches")) {
      branches.push_back({field(b, "ctor").get<std::string>(),
                          field(b, "vars").get<std::vector<std::string>>(),
                          read_expr(field(b, "body"))});
    }
    return expr::case_(read_term(field(j, "scrutinee")), std::move(branches));
  }
  if (tag == "self_call") return expr::self_call(read_terms(field(j, "args")));
  if (tag == "ext_call") {
    return expr::ext_call(field(j, "fun").get<std::string>(), read_terms(field(j, "args")));
  }
  if (tag == "ref_new") return expr::ref_new(read_term(field(j, "value")));
  if (tag == "ref_get") return expr::ref_get(read_term(field(j, "ref")));
  if (tag == "ref_set") return expr::ref_set(read_term(field(j, "ref")), read_term(field(j, "value")));
  malformed("unknown expression tag '" + tag + "'");
}

Premise::Kind read_kind(const std::string& s) {
  for (auto k : {Premise::Kind::Eq, Premise::Kind::Cond, Premise::Kind::HeapGet,
                 Premise::Kind::HeapEq, Premise::Kind::Hyp, Premise::Kind::OptEq,
                 Premise::Kind::Sem, Premise::Kind::GeneralHyp, Premise::Kind::Body}) {
    if (to_string(k) == s) return k;
  }
  malformed("unknown premise kind '" + s + "'");
}

Premise read_premise(const json& j) {
  Premise p;
  p.kind = read_kind(field(j, "kind").get<std::string>());
  if (j.contains("lhs")) p.lhs = read_term(j["lhs"]);
  if (j.contains("rhs")) p.rhs = read_term(j["rhs"]);
  if (j.contains("term")) p.term = read_term(j["term"]);
  if (j.contains("binders")) p.binders = j["binders"].get<std::vector<std::string>>();
  if (j.contains("body")) p.body = read_expr(j["body"]);
  return p;
}

// Types come back from their printed form: `nat`, `'a node ref`,
// `(nat, bool) pair`, `nat ⇒ nat option`.
class TypeReader {
 public:
  explicit TypeReader(const std::string& s) : s_(s) {}

  Type read() {
    Type t = arrow();
    skip();
    if (pos_ != s_.size()) malformed("bad type '" + s_ + "'");
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '(' && s_[pos_] != ')' &&
           s_[pos_] != ',' && s_.compare(pos_, 3, "⇒") != 0) {
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  Type arrow() {
    std::vector<Type> parts{postfix()};
    while (eat("⇒")) parts.push_back(postfix());
    if (parts.size() == 1) return parts[0];
    return Type::con("⇒", std::move(parts));
  }

  Type postfix() {
    std::vector<Type> args;
    if (eat("(")) {
      args.push_back(arrow());
      while (eat(",")) args.push_back(arrow());
      if (!eat(")")) malformed("bad type '" + s_ + "'");
    } else {
      std::string name = ident();
      if (name.empty()) malformed("bad type '" + s_ + "'");
      args.push_back(name[0] == '\'' ? Type::var(name) : Type::con(name));
    }
    Type cur = args.size() == 1 ? args[0] : Type{};
    bool pending = args.size() > 1;
    while (true) {
      std::size_t save = pos_;
      skip();
      if (pos_ >= s_.size() || s_[pos_] == ')' || s_[pos_] == ',' ||
          s_.compare(pos_, 3, "⇒") == 0) {
        pos_ = save;
        break;
      }
      std::string name = ident();
      if (pending) {
        cur = Type::con(name, std::move(args));
        pending = false;
      } else {
        cur = Type::con(name, {cur});
      }
    }
    if (pending) malformed("bad type '" + s_ + "'");
    return cur;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::vector<TypedVar> read_vars(const json& j) {
  std::vector<TypedVar> out;
  for (const auto& v : j) {
    std::string type = field(v, "type").get<std::string>();
    out.push_back({field(v, "name").get<std::string>(), TypeReader(type).read()});
  }
  return out;
}

bool same_premise(const Premise& a, const Premise& b);

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  return term_json(a) == term_json(b);
}

bool same_premise(const Premise& a, const Premise& b) {
  return premise_json(a) == premise_json(b);
}

}  // namespace

std::string render_json(const InductionRule& rule) {
  json obligations = json::array();
  for (const auto& o : rule.obligations) {
    json premises = json::array();
    for (const auto& p : o.premises) premises.push_back(premise_json(p));
    obligations.push_back({{"vars", vars_json(o.vars)},
                           {"premises", premises},
                           {"conclusion", term_json(o.conclusion)}});
  }
  json out = {
      {"function", rule.function},
      {"monad", std::string(to_string(rule.monad))},
      {"kind", rule.kind == InductionRule::Kind::Raw ? "raw" : "refined"},
      {"conclusion",
       {{"vars", vars_json(rule.schema_vars)},
        {"premise", premise_json(rule.schema_premise)},
        {"conclusion", term_json(rule.schema_conclusion)}}},
      {"obligations", obligations},
  };
  return out.dump(2) + "\n";
}

InductionRule parse_rule_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed rule JSON: ") + e.what());
  }
  try {
    InductionRule rule;
    rule.function = field(j, "function").get<std::string>();
    std::string monad = field(j, "monad").get<std::string>();
    if (monad == to_string(Monad::Option)) {
      rule.monad = Monad::Option;
    } else if (monad == to_string(Monad::Heap)) {
      rule.monad = Monad::Heap;
    } else {
      malformed("unknown monad '" + monad + "'");
    }
    std::string kind = field(j, "kind").get<std::string>();
    if (kind != "raw" && kind != "refined") malformed("unknown kind '" + kind + "'");
    rule.kind = kind == "raw" ? InductionRule::Kind::Raw : InductionRule::Kind::Refined;
    const json& concl = field(j, "conclusion");
    rule.schema_vars = read_vars(field(concl, "vars"));
    rule.schema_premise = read_premise(field(concl, "premise"));
    rule.schema_conclusion = read_term(field(concl, "conclusion"));
    for (const auto& o : field(j, "obligations")) {
      Obligation ob;
      ob.vars = read_vars(field(o, "vars"));
      for (const auto& p : field(o, "premises")) ob.premises.push_back(read_premise(p));
      ob.conclusion = read_term(field(o, "conclusion"));
      rule.obligations.push_back(std::move(ob));
    }
    return rule;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed rule JSON: ") + e.what());
  }
}

bool same_structure(const InductionRule& a, const InductionRule& b) {
  if (a.function != b.function || a.monad != b.monad || a.kind != b.kind) return false;
  if (!same_premise(a.schema_premise, b.schema_premise)) return false;
  if (!same_term(a.schema_conclusion, b.schema_conclusion)) return false;
  auto same_vars = [](const std::vector<TypedVar>& x, const std::vector<TypedVar>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].name != y[i].name || !(x[i].type == y[i].type)) return false;
    }
    return true;
  };
  if (!same_vars(a.schema_vars, b.schema_vars)) return false;
  if (a.obligations.size() != b.obligations.size()) return false;
  for (std::size_t i = 0; i < a.obligations.size(); ++i) {
    const auto& x = a.obligations[i];
    const auto& y = b.obligations[i];
    if (!same_vars(x.vars, y.vars) || !same_term(x.conclusion, y.conclusion)) return false;
    if (x.premises.size() != y.premises.size()) return false;
    for (std::size_t k = 0; k < x.premises.size(); ++k) {
      if (!same_premise(x.premises[k], y.premises[k])) return false;
    }
  }
  return true;
}

}  // namespace mfx
