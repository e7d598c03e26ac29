#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfx/syntax.hpp"
#include "syntax/lexer.hpp"

namespace mfx::detail {

/// Names accepted by Call nodes in predicate specs and proof obligations,
/// beyond the program's own pure definitions.
bool is_logic_builtin(std::string_view name);

/// Recursive-descent parser for the DSL. The same machinery parses closed
/// value literals and predicate specs; `TermMode` selects which name forms
/// are legal inside pure expressions.
class Parser {
 public:
  enum class TermMode {
    Program,  // DSL bodies: locals, constructors, pure defs
    Closed,   // literals: no variables at all
    Logic,    // predicate specs: builtins, tuples, `matches`, function refs
  };

  Parser(std::string_view source, Program& program, ParseOptions options = {});

  void parse_program();

  TermPtr parse_term();
  Type parse_type();

  // Token-level access for the small auxiliary grammars (heap files, specs).
  const Token& peek(std::size_t ahead = 0) const;
  const Token& advance();
  bool accept_sym(std::string_view s);
  const Token& expect_sym(std::string_view s);
  const Token& expect_ident();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool starts_atom() const;

  void set_mode(TermMode mode) { mode_ = mode; }
  void push_var(const std::string& name) { scope_.push_back({name, name}); }

  [[noreturn]] void fail(StaticError::Kind kind, SourceLoc loc,
                         const std::string& msg) const;
  [[noreturn]] void fail_here(const std::string& msg) const;

 private:
  struct Binding {
    std::string source;
    std::string unique;
  };

  void parse_datatype();
  void parse_fundef(Monad monad);
  void parse_puredef();
  std::vector<Param> parse_params();
  Type parse_type_atom();
  Type parse_type_postfix(Type base);
  Type apply_type_name(const Token& name_tok, std::vector<Type> args);

  ExprPtr parse_expr();
  ExprPtr parse_do();
  ExprPtr parse_case();
  ExprPtr parse_call_expr(const Token& name_tok);
  std::vector<TermPtr> parse_call_args();

  TermPtr parse_implies();
  TermPtr parse_disj();
  TermPtr parse_conj();
  TermPtr parse_neg();
  TermPtr parse_cmp();
  TermPtr parse_cons();
  TermPtr parse_add();
  TermPtr parse_mul();
  TermPtr parse_app();
  TermPtr parse_atom();
  TermPtr resolve_name(const Token& tok);

  std::string declare_binder(const Token& tok);
  std::string fresh_anonymous();
  const std::string* lookup_var(std::string_view source) const;
  void check_binder_name(const Token& tok) const;
  void check_defined_once(const Token& tok) const;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program& program_;
  ParseOptions options_;
  TermMode mode_ = TermMode::Program;
  bool pattern_mode_ = false;

  // Per-definition state.
  std::vector<Binding> scope_;
  std::set<std::string> taken_;
  std::set<std::string> bound_in_def_;
  std::map<std::string, std::string> source_names_;
  const std::vector<std::string>* type_params_ = nullptr;
  std::string self_name_;
  Monad self_monad_ = Monad::Option;
  std::size_t self_arity_ = 0;
  bool in_fundef_ = false;
  int anon_counter_ = 0;
};

}  // namespace mfx::detail
