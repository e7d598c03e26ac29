#include "syntax/parser.hpp"

#include <array>

#include "syntax/typecheck.hpp"

namespace mfx::detail {
namespace {

constexpr std::array kLogicBuiltins = {
    "get_ref", "set_ref", "new_ref_with", "occurs_in",
    "heap_list", "filter", "orbit", "length",
};

bool is_bool_word(const Token& t) {
  return t.is_word("True") || t.is_word("False") || t.is_word("true") ||
         t.is_word("false");
}

TermPtr located(TermPtr t, SourceLoc loc) {
  auto copy = std::make_shared<Term>(*t);
  copy->loc = loc;
  return copy;
}

ExprPtr make_expr(Expr::Node node, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

}  // namespace

bool is_logic_builtin(std::string_view name) {
  for (auto b : kLogicBuiltins) {
    if (name == b) return true;
  }
  return false;
}

Parser::Parser(std::string_view source, Program& program, ParseOptions options)
    : toks_(tokenize(source)), program_(program), options_(options) {
  for (const auto& t : toks_) {
    if (t.kind == Token::Kind::Ident) taken_.insert(t.text);
  }
}

// ---------------------------------------------------------------------------
// Token helpers
// ---------------------------------------------------------------------------

const Token& Parser::peek(std::size_t ahead) const {
  std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[i];
}

const Token& Parser::advance() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool Parser::accept_sym(std::string_view s) {
  if (peek().is_sym(s)) {
    advance();
    return true;
  }
  return false;
}

const Token& Parser::expect_sym(std::string_view s) {
  if (!peek().is_sym(s)) {
    fail_here("expected '" + std::string(s) + "' but found " + describe(peek()));
  }
  return advance();
}

const Token& Parser::expect_ident() {
  if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) {
    fail_here("expected an identifier but found " + describe(peek()));
  }
  return advance();
}

void Parser::fail(StaticError::Kind kind, SourceLoc loc,
                  const std::string& msg) const {
  throw StaticError(kind, loc, msg);
}

void Parser::fail_here(const std::string& msg) const {
  fail(StaticError::Kind::Syntax, peek().loc, msg);
}

bool Parser::starts_atom() const {
  const Token& t = peek();
  switch (t.kind) {
    case Token::Kind::Number:
    case Token::Kind::RefLit:
      return true;
    case Token::Kind::Ident:
      return is_bool_word(t) || !is_keyword(t.text);
    case Token::Kind::Sym:
      return t.is_sym("(") || t.is_sym("[") ||
             (t.is_sym("_") && (pattern_mode_ || mode_ == TermMode::Logic));
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

void Parser::parse_program() {
  while (!at_end()) {
    const Token& t = peek();
    if (t.is_word("datatype")) {
      parse_datatype();
    } else if (t.is_word("option") && peek(1).is_word("fun")) {
      advance();
      parse_fundef(Monad::Option);
    } else if (t.is_word("heap") && peek(1).is_word("fun")) {
      advance();
      parse_fundef(Monad::Heap);
    } else if (t.is_word("fun")) {
      parse_puredef();
    } else {
      fail_here("expected 'datatype', 'option fun', 'heap fun' or 'fun' but found " +
                describe(t));
    }
  }
}

void Parser::check_defined_once(const Token& tok) const {
  const std::string& n = tok.text;
  if (program_.find_fun(n) || program_.find_pure(n) || program_.find_ctor(n) ||
      ctor_arity(program_, n) || is_logic_builtin(n)) {
    fail(StaticError::Kind::Scope, tok.loc, "name '" + n + "' is already defined");
  }
}

void Parser::parse_datatype() {
  advance();  // datatype
  std::vector<std::string> params;
  auto take_tyvars = [&] {
    while (peek().kind == Token::Kind::TyVar) params.push_back(advance().text);
  };
  take_tyvars();
  const Token& name_tok = expect_ident();
  take_tyvars();
  if (program_.find_data(name_tok.text) || name_tok.text == "nat" ||
      name_tok.text == "bool" || name_tok.text == "unit" ||
      name_tok.text == "list" || name_tok.text == "option" ||
      name_tok.text == "ref" || name_tok.text == "heap") {
    fail(StaticError::Kind::Scope, name_tok.loc,
         "type '" + name_tok.text + "' is already defined");
  }
  expect_sym("=");

  // Registered before the constructors so that fields may refer to it.
  program_.data_decls.push_back(DataDecl{name_tok.text, params, {}});
  std::size_t index = program_.data_decls.size() - 1;

  std::vector<Constructor> ctors;
  do {
    const Token& ctor_tok = expect_ident();
    check_defined_once(ctor_tok);
    for (const auto& c : ctors) {
      if (c.name == ctor_tok.text) {
        fail(StaticError::Kind::Scope, ctor_tok.loc,
             "constructor '" + c.name + "' declared twice");
      }
    }
    Constructor ctor{ctor_tok.text, {}};
    while (peek().kind == Token::Kind::TyVar || peek().is_sym("(") ||
           (peek().kind == Token::Kind::Ident && !is_keyword(peek().text))) {
      SourceLoc loc = peek().loc;
      Type field = parse_type_atom();
      validate_type(program_, field, loc, &params);
      ctor.fields.push_back(std::move(field));
    }
    ctors.push_back(std::move(ctor));
    // Make constructors visible one by one to detect duplicates.
    program_.data_decls[index].constructors = ctors;
  } while (accept_sym("|"));
}

std::vector<Param> Parser::parse_params() {
  expect_sym("(");
  std::vector<Param> params;
  if (accept_sym(")")) return params;
  do {
    const Token& name = expect_ident();
    for (const auto& p : params) {
      if (p.name == name.text) {
        fail(StaticError::Kind::Scope, name.loc,
             "parameter '" + name.text + "' declared twice");
      }
    }
    check_binder_name(name);
    expect_sym(":");
    SourceLoc loc = peek().loc;
    Type t = parse_type();
    validate_type(program_, t, loc, nullptr);
    params.push_back(Param{name.text, std::move(t)});
  } while (accept_sym(","));
  expect_sym(")");
  return params;
}

void Parser::parse_fundef(Monad monad) {
  advance();  // fun
  const Token& name_tok = expect_ident();
  check_defined_once(name_tok);

  self_name_ = name_tok.text;
  self_monad_ = monad;
  in_fundef_ = true;
  scope_.clear();
  bound_in_def_.clear();
  source_names_.clear();
  anon_counter_ = 0;

  std::vector<Param> params = parse_params();
  self_arity_ = params.size();
  expect_sym(":");
  SourceLoc rloc = peek().loc;
  Type result = parse_type();
  validate_type(program_, result, rloc, nullptr);
  expect_sym("=");

  for (const auto& p : params) {
    scope_.push_back({p.name, p.name});
    bound_in_def_.insert(p.name);
  }
  mode_ = TermMode::Program;
  ExprPtr body = parse_expr();

  FunDef fd;
  fd.name = name_tok.text;
  fd.monad = monad;
  fd.params = std::move(params);
  fd.result_type = std::move(result);
  fd.body = std::move(body);
  fd.source_names = source_names_;
  in_fundef_ = false;
  scope_.clear();

  typecheck_fundef(program_, fd);
  program_.fun_defs.push_back(std::move(fd));
}

void Parser::parse_puredef() {
  advance();  // fun
  const Token& name_tok = expect_ident();
  check_defined_once(name_tok);
  in_fundef_ = false;
  scope_.clear();
  bound_in_def_.clear();

  std::vector<Param> params = parse_params();
  expect_sym(":");
  SourceLoc rloc = peek().loc;
  Type result = parse_type();
  validate_type(program_, result, rloc, nullptr);
  expect_sym("=");
  for (const auto& p : params) scope_.push_back({p.name, p.name});
  mode_ = TermMode::Program;
  TermPtr body = parse_term();
  scope_.clear();

  PureDef def{name_tok.text, std::move(params), std::move(result), std::move(body)};
  typecheck_puredef(program_, def);
  program_.pure_defs.push_back(std::move(def));
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

Type Parser::parse_type() { return parse_type_postfix(parse_type_atom()); }

Type Parser::apply_type_name(const Token& name_tok, std::vector<Type> args) {
  const std::string& n = name_tok.text;
  std::size_t expected = 0;
  if (n == "nat" || n == "bool" || n == "unit" || n == "heap") {
    expected = 0;
  } else if (n == "list" || n == "option" || n == "ref") {
    expected = 1;
  } else if (const DataDecl* d = program_.find_data(n)) {
    expected = d->type_params.size();
  } else {
    fail(StaticError::Kind::Scope, name_tok.loc, "unknown type '" + n + "'");
  }
  if (args.size() != expected) {
    fail(StaticError::Kind::Scope, name_tok.loc,
         "type '" + n + "' expects " + std::to_string(expected) +
             " argument(s) but got " + std::to_string(args.size()));
  }
  return Type::con(n, std::move(args));
}

Type Parser::parse_type_atom() {
  const Token& t = peek();
  if (t.kind == Token::Kind::TyVar) {
    advance();
    return Type::var(t.text);
  }
  if (t.is_sym("(")) {
    advance();
    std::vector<Type> inner{parse_type()};
    while (accept_sym(",")) inner.push_back(parse_type());
    expect_sym(")");
    if (inner.size() == 1) return inner.front();
    const Token& name_tok = expect_ident();
    return apply_type_name(name_tok, std::move(inner));
  }
  const Token& name_tok = expect_ident();
  return apply_type_name(name_tok, {});
}

Type Parser::parse_type_postfix(Type base) {
  while (peek().kind == Token::Kind::Ident &&
         (!is_keyword(peek().text) || peek().text == "ref" || peek().text == "option")) {
    const std::string& n = peek().text;
    bool unary = n == "list" || n == "option" || n == "ref";
    if (const DataDecl* d = program_.find_data(n)) unary = d->type_params.size() == 1;
    if (!unary) break;
    const Token& name_tok = advance();
    base = apply_type_name(name_tok, {std::move(base)});
  }
  return base;
}

// ---------------------------------------------------------------------------
// Computations
// ---------------------------------------------------------------------------

ExprPtr Parser::parse_expr() {
  const Token& t = peek();
  SourceLoc loc = t.loc;
  auto require_heap = [&](std::string_view what) {
    if (self_monad_ != Monad::Heap) {
      fail(StaticError::Kind::Monad, loc,
           std::string(what) + " is only allowed in heap definitions");
    }
  };

  if (t.is_word("return")) {
    advance();
    return make_expr(Expr::Return{parse_term()}, loc);
  }
  if (t.is_word("do")) return parse_do();
  if (t.is_word("if")) {
    advance();
    TermPtr cond = parse_term();
    if (!peek().is_word("then")) fail_here("expected 'then' but found " + describe(peek()));
    advance();
    ExprPtr a = parse_expr();
    if (!peek().is_word("else")) fail_here("expected 'else' but found " + describe(peek()));
    advance();
    ExprPtr b = parse_expr();
    return make_expr(Expr::If{std::move(cond), std::move(a), std::move(b)}, loc);
  }
  if (t.is_word("case")) return parse_case();
  if (t.is_word("ref")) {
    require_heap("'ref'");
    advance();
    return make_expr(Expr::RefNew{parse_term()}, loc);
  }
  if (t.is_sym("!")) {
    require_heap("'!'");
    advance();
    return make_expr(Expr::RefGet{parse_atom()}, loc);
  }
  if (t.is_sym("(")) {
    std::size_t save = pos_;
    std::size_t scope_size = scope_.size();
    try {
      advance();
      ExprPtr inner = parse_expr();
      expect_sym(")");
      return inner;
    } catch (const StaticError& first) {
      if (first.kind() != StaticError::Kind::Syntax) throw;
      pos_ = save;
      scope_.resize(scope_size);
      try {
        TermPtr lhs = parse_term();
        if (!peek().is_sym(":=")) throw first;
        require_heap("':='");
        advance();
        return make_expr(Expr::RefSet{std::move(lhs), parse_term()}, loc);
      } catch (const StaticError&) {
        throw first;
      }
    }
  }
  if (t.kind == Token::Kind::Ident && !is_keyword(t.text) && !lookup_var(t.text) &&
      (t.text == self_name_ || program_.find_fun(t.text))) {
    const Token& name_tok = advance();
    return parse_call_expr(name_tok);
  }
  if (t.kind == Token::Kind::Ident && program_.find_pure(t.text) && !lookup_var(t.text)) {
    fail(StaticError::Kind::Monad, loc,
         "pure function '" + t.text + "' used as a computation; wrap it in 'return'");
  }

  TermPtr lhs = parse_term();
  if (!peek().is_sym(":=")) {
    fail_here("expected a computation; found a pure expression followed by " +
              describe(peek()));
  }
  require_heap("':='");
  advance();
  return make_expr(Expr::RefSet{std::move(lhs), parse_term()}, loc);
}

ExprPtr Parser::parse_do() {
  SourceLoc loc = advance().loc;  // do
  std::size_t scope_size = scope_.size();

  struct Stmt {
    std::string var;
    ExprPtr e;
    SourceLoc loc;
  };
  std::vector<Stmt> stmts;
  while (true) {
    SourceLoc sloc = peek().loc;
    if (peek().kind == Token::Kind::Ident && peek(1).is_sym("←")) {
      const Token& var_tok = advance();
      advance();  // ←
      ExprPtr bound = parse_expr();
      std::string unique = declare_binder(var_tok);
      stmts.push_back({unique, std::move(bound), sloc});
    } else if (peek().is_sym("_") && peek(1).is_sym("←")) {
      advance();
      advance();
      stmts.push_back({fresh_anonymous(), parse_expr(), sloc});
    } else {
      stmts.push_back({"", parse_expr(), sloc});
    }
    if (!accept_sym(";")) break;
    if (peek().is_word("done")) break;
  }
  if (!peek().is_word("done")) fail_here("expected ';' or 'done' but found " + describe(peek()));
  advance();
  scope_.resize(scope_size);

  if (!stmts.back().var.empty()) {
    fail(StaticError::Kind::Syntax, stmts.back().loc,
         "a do block must end with an expression, not a binding");
  }
  ExprPtr body = stmts.back().e;
  for (std::size_t i = stmts.size() - 1; i-- > 0;) {
    std::string var = stmts[i].var.empty() ? fresh_anonymous() : stmts[i].var;
    body = make_expr(Expr::Bind{std::move(var), stmts[i].e, std::move(body)},
                     i == 0 ? loc : stmts[i].loc);
  }
  return body;
}

ExprPtr Parser::parse_case() {
  SourceLoc loc = advance().loc;  // case
  TermPtr scrutinee = parse_term();
  if (!peek().is_word("of")) fail_here("expected 'of' but found " + describe(peek()));
  advance();

  std::vector<CaseBranch> branches;
  do {
    std::size_t scope_size = scope_.size();
    CaseBranch br;
    const Token& first = peek();
    auto bind_var = [&] {
      if (accept_sym("_")) return fresh_anonymous();
      const Token& v = expect_ident();
      return declare_binder(v);
    };

    if (first.is_sym("[")) {
      advance();
      expect_sym("]");
      br.ctor = "[]";
    } else if ((first.kind == Token::Kind::Ident || first.is_sym("_")) &&
               peek(1).is_sym("#")) {
      br.ctor = "#";
      br.vars.push_back(bind_var());
      expect_sym("#");
      br.vars.push_back(bind_var());
    } else {
      const Token& ctor_tok = expect_ident();
      auto arity = ctor_arity(program_, ctor_tok.text);
      if (!arity) {
        fail(StaticError::Kind::Scope, ctor_tok.loc,
             "unknown constructor '" + ctor_tok.text + "' in pattern");
      }
      br.ctor = ctor_tok.text;
      for (std::size_t i = 0; i < *arity; ++i) {
        if (!(peek().kind == Token::Kind::Ident || peek().is_sym("_"))) {
          fail(StaticError::Kind::Scope, peek().loc,
               "constructor '" + br.ctor + "' expects " + std::to_string(*arity) +
                   " pattern variable(s)");
        }
        br.vars.push_back(bind_var());
      }
    }
    if (!accept_sym("⇒")) fail_here("expected '⇒' but found " + describe(peek()));
    br.body = parse_expr();
    scope_.resize(scope_size);
    branches.push_back(std::move(br));
  } while (accept_sym("|"));

  return make_expr(Expr::Case{std::move(scrutinee), std::move(branches)}, loc);
}

std::vector<TermPtr> Parser::parse_call_args() {
  expect_sym("(");
  std::vector<TermPtr> args;
  while (!peek().is_sym(")")) {
    if (at_end()) fail_here("unterminated argument list");
    args.push_back(parse_term());
    accept_sym(",");
  }
  advance();
  return args;
}

ExprPtr Parser::parse_call_expr(const Token& name_tok) {
  SourceLoc loc = name_tok.loc;
  if (!peek().is_sym("(")) {
    fail_here("expected '(' after function name '" + name_tok.text + "'");
  }
  std::vector<TermPtr> args = parse_call_args();
  if (name_tok.text == self_name_) {
    if (args.size() != self_arity_) {
      fail(StaticError::Kind::Scope, loc,
           "'" + self_name_ + "' expects " + std::to_string(self_arity_) +
               " argument(s) but got " + std::to_string(args.size()));
    }
    return make_expr(Expr::SelfCall{std::move(args)}, loc);
  }
  const FunDef* callee = program_.find_fun(name_tok.text);
  if (callee->monad != self_monad_) {
    fail(StaticError::Kind::Monad, loc,
         "cannot call " + std::string(to_string(callee->monad)) + " function '" +
             callee->name + "' from " + std::string(to_string(self_monad_)) +
             " function '" + self_name_ + "'");
  }
  if (args.size() != callee->params.size()) {
    fail(StaticError::Kind::Scope, loc,
         "'" + callee->name + "' expects " + std::to_string(callee->params.size()) +
             " argument(s) but got " + std::to_string(args.size()));
  }
  return make_expr(Expr::ExtCall{name_tok.text, std::move(args)}, loc);
}

// ---------------------------------------------------------------------------
// Pure expressions
// ---------------------------------------------------------------------------

TermPtr Parser::parse_term() { return parse_implies(); }

TermPtr Parser::parse_implies() {
  TermPtr lhs = parse_disj();
  if (peek().is_sym("⟶")) {
    SourceLoc loc = advance().loc;
    return located(term::binary(BinOp::Implies, lhs, parse_implies()), loc);
  }
  return lhs;
}

TermPtr Parser::parse_disj() {
  TermPtr lhs = parse_conj();
  while (peek().is_sym("∨")) {
    SourceLoc loc = advance().loc;
    lhs = located(term::binary(BinOp::Or, lhs, parse_conj()), loc);
  }
  return lhs;
}

TermPtr Parser::parse_conj() {
  TermPtr lhs = parse_neg();
  while (peek().is_sym("∧")) {
    SourceLoc loc = advance().loc;
    lhs = located(term::binary(BinOp::And, lhs, parse_neg()), loc);
  }
  return lhs;
}

TermPtr Parser::parse_neg() {
  if (peek().is_sym("¬") || peek().is_word("not")) {
    SourceLoc loc = advance().loc;
    return located(term::negate(parse_neg()), loc);
  }
  return parse_cmp();
}

TermPtr Parser::parse_cmp() {
  TermPtr lhs = parse_cons();
  const Token& t = peek();
  std::optional<BinOp> op;
  if (t.is_sym("=")) op = BinOp::Eq;
  if (t.is_sym("≠")) op = BinOp::Ne;
  if (t.is_sym("<")) op = BinOp::Lt;
  if (op) {
    SourceLoc loc = advance().loc;
    return located(term::binary(*op, lhs, parse_cons()), loc);
  }
  if (t.is_word("matches")) {
    if (mode_ != TermMode::Logic) fail_here("'matches' is only allowed in predicate specs");
    SourceLoc loc = advance().loc;
    bool saved = pattern_mode_;
    pattern_mode_ = true;
    TermPtr pat = parse_app();
    pattern_mode_ = saved;
    return located(term::matches(lhs, pat), loc);
  }
  return lhs;
}

TermPtr Parser::parse_cons() {
  TermPtr head = parse_add();
  if (peek().is_sym("#")) {
    SourceLoc loc = advance().loc;
    return located(term::cons(head, parse_cons()), loc);
  }
  return head;
}

TermPtr Parser::parse_add() {
  TermPtr lhs = parse_mul();
  while (peek().is_sym("+") || peek().is_sym("-")) {
    BinOp op = peek().is_sym("+") ? BinOp::Add : BinOp::Sub;
    SourceLoc loc = advance().loc;
    lhs = located(term::binary(op, lhs, parse_mul()), loc);
  }
  return lhs;
}

TermPtr Parser::parse_mul() {
  TermPtr lhs = parse_app();
  while (peek().is_word("div") || peek().is_word("mod")) {
    BinOp op = peek().is_word("div") ? BinOp::Div : BinOp::Mod;
    SourceLoc loc = advance().loc;
    lhs = located(term::binary(op, lhs, parse_app()), loc);
  }
  return lhs;
}

TermPtr Parser::parse_app() {
  const Token& t = peek();
  if (t.kind == Token::Kind::Ident && !lookup_var(t.text)) {
    auto arity = ctor_arity(program_, t.text);
    if (arity && *arity > 0) {
      const Token& ctor_tok = advance();
      std::vector<TermPtr> args;
      for (std::size_t i = 0; i < *arity; ++i) {
        if (!starts_atom()) {
          fail(StaticError::Kind::Scope, peek().loc,
               "constructor '" + ctor_tok.text + "' expects " +
                   std::to_string(*arity) + " argument(s) but got " +
                   std::to_string(i));
        }
        args.push_back(parse_atom());
      }
      return located(term::ctor(ctor_tok.text, std::move(args)), ctor_tok.loc);
    }
  }
  return parse_atom();
}

TermPtr Parser::parse_atom() {
  const Token& t = peek();
  SourceLoc loc = t.loc;
  switch (t.kind) {
    case Token::Kind::Number:
      advance();
      return located(term::nat(Nat(t.text)), loc);
    case Token::Kind::RefLit:
      advance();
      return located(term::ref(std::stoull(t.text)), loc);
    case Token::Kind::Ident:
      if (t.is_word("True") || t.is_word("true")) {
        advance();
        return located(term::boolean(true), loc);
      }
      if (t.is_word("False") || t.is_word("false")) {
        advance();
        return located(term::boolean(false), loc);
      }
      if (is_keyword(t.text)) break;
      return resolve_name(advance());
    case Token::Kind::Sym:
      if (t.is_sym("_") && (pattern_mode_ || mode_ == TermMode::Logic)) {
        advance();
        return located(term::var("_"), loc);
      }
      if (t.is_sym("(")) {
        advance();
        if (accept_sym(")")) return located(term::unit(), loc);
        std::vector<TermPtr> elems{parse_term()};
        while (accept_sym(",")) elems.push_back(parse_term());
        expect_sym(")");
        if (elems.size() == 1) return elems.front();
        if (mode_ != TermMode::Logic) {
          fail(StaticError::Kind::Syntax, loc, "tuples are not part of the DSL");
        }
        return located(term::tuple(std::move(elems)), loc);
      }
      if (t.is_sym("[")) {
        advance();
        std::vector<TermPtr> elems;
        if (!peek().is_sym("]")) {
          elems.push_back(parse_term());
          while (accept_sym(",")) elems.push_back(parse_term());
        }
        expect_sym("]");
        return located(term::list(std::move(elems)), loc);
      }
      break;
    default:
      break;
  }
  fail_here("expected an expression but found " + describe(t));
}

TermPtr Parser::resolve_name(const Token& tok) {
  const std::string& n = tok.text;
  SourceLoc loc = tok.loc;
  if (const std::string* unique = lookup_var(n)) {
    return located(term::var(*unique), loc);
  }
  if (auto arity = ctor_arity(program_, n)) {
    if (*arity != 0) {
      fail(StaticError::Kind::Syntax, loc,
           "constructor '" + n + "' takes arguments; parenthesize its application");
    }
    return located(term::ctor(n), loc);
  }
  if (const PureDef* def = program_.find_pure(n)) {
    if (mode_ == TermMode::Logic && !peek().is_sym("(")) {
      return located(term::var(n), loc);  // function reference, e.g. filter(even, xs)
    }
    if (!peek().is_sym("(")) fail_here("expected '(' after function name '" + n + "'");
    std::vector<TermPtr> args = parse_call_args();
    if (args.size() != def->params.size()) {
      fail(StaticError::Kind::Scope, loc,
           "'" + n + "' expects " + std::to_string(def->params.size()) +
               " argument(s) but got " + std::to_string(args.size()));
    }
    return located(term::call(n, std::move(args)), loc);
  }
  if (mode_ == TermMode::Logic && is_logic_builtin(n)) {
    if (!peek().is_sym("(")) fail_here("expected '(' after builtin '" + n + "'");
    return located(term::call(n, parse_call_args()), loc);
  }
  if (in_fundef_ && n == self_name_) {
    if (options_.reject_pure_self_calls) {
      fail(StaticError::Kind::Monad, loc,
           "recursive call to '" + n + "' inside a pure expression; bind its result with 'do'");
    }
    if (!peek().is_sym("(")) fail_here("expected '(' after function name '" + n + "'");
    return located(term::call(n, parse_call_args()), loc);
  }
  if (mode_ == TermMode::Logic && program_.find_fun(n) && peek().is_sym("(")) {
    return located(term::call(n, parse_call_args()), loc);
  }
  if (program_.find_fun(n)) {
    fail(StaticError::Kind::Monad, loc,
         "monadic function '" + n + "' called inside a pure expression");
  }
  if (mode_ == TermMode::Logic && pattern_mode_) {
    return located(term::var(n), loc);
  }
  fail(StaticError::Kind::Scope, loc, "unbound name '" + n + "'");
}

// ---------------------------------------------------------------------------
// Binders
// ---------------------------------------------------------------------------

void Parser::check_binder_name(const Token& tok) const {
  const std::string& n = tok.text;
  if (is_keyword(n)) fail(StaticError::Kind::Syntax, tok.loc, "keyword '" + n + "' used as a name");
  if (ctor_arity(program_, n) || program_.find_pure(n) || program_.find_fun(n) ||
      (in_fundef_ && n == self_name_)) {
    fail(StaticError::Kind::Scope, tok.loc,
         "binder '" + n + "' shadows a constructor or function");
  }
}

std::string Parser::declare_binder(const Token& tok) {
  check_binder_name(tok);
  std::string unique = tok.text;
  if (bound_in_def_.count(unique)) {
    int k = 1;
    while (taken_.count(tok.text + "_" + std::to_string(k))) ++k;
    unique = tok.text + "_" + std::to_string(k);
    source_names_[unique] = tok.text;
  }
  bound_in_def_.insert(unique);
  taken_.insert(unique);
  scope_.push_back({tok.text, unique});
  return unique;
}

std::string Parser::fresh_anonymous() {
  std::string name;
  do {
    name = "_" + std::to_string(++anon_counter_);
  } while (bound_in_def_.count(name));
  bound_in_def_.insert(name);
  return name;
}

const std::string* Parser::lookup_var(std::string_view source) const {
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
    if (it->source == source) return &it->unique;
  }
  return nullptr;
}

}  // namespace mfx::detail

namespace mfx {

Program parse_program(std::string_view source, const ParseOptions& options) {
  Program program;
  detail::Parser parser(source, program, options);
  parser.parse_program();
  return program;
}

std::vector<TermPtr> parse_closed_terms(std::string_view source,
                                        const Program& program) {
  Program scratch = program;
  detail::Parser parser(source, scratch);
  parser.set_mode(detail::Parser::TermMode::Closed);
  std::vector<TermPtr> out;
  while (!parser.at_end()) {
    out.push_back(parser.parse_term());
    parser.accept_sym(",");
  }
  return out;
}

}  // namespace mfx
