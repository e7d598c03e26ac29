#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mfx/common.hpp"

namespace mfx {

enum class Monad { Option, Heap };

std::string_view to_string(Monad m);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// A type of the object language. `Con` covers the builtins (nat, bool, unit,
/// list, option, ref, heap) as well as user datatypes; `Var` is a rigid type
/// variable such as 'a; `Meta` only exists while the checker is unifying.
struct Type {
  enum class Kind { Con, Var, Meta };

  Kind kind = Kind::Con;
  std::string name;
  std::vector<Type> args;
  int meta = -1;

  static Type con(std::string name, std::vector<Type> args = {});
  static Type var(std::string name);
  static Type nat() { return con("nat"); }
  static Type boolean() { return con("bool"); }
  static Type unit() { return con("unit"); }
  static Type heap() { return con("heap"); }
  static Type list(Type elem) { return con("list", {std::move(elem)}); }
  static Type option(Type elem) { return con("option", {std::move(elem)}); }
  static Type ref(Type elem) { return con("ref", {std::move(elem)}); }

  bool is(std::string_view con_name) const {
    return kind == Kind::Con && name == con_name;
  }

  bool operator==(const Type&) const = default;
};

std::string to_string(const Type& t);

// ---------------------------------------------------------------------------
// Pure terms
// ---------------------------------------------------------------------------

enum class BinOp { Add, Sub, Div, Mod, Eq, Ne, Lt, And, Or, Implies };

std::string_view to_string(BinOp op);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Pure expressions. The DSL only produces Var, literals, Ctor, Call, Binary
/// and Not; Tuple and Matches appear in proof obligations and predicate specs.
///
/// The builtin list and option constructors are ordinary Ctor nodes named
/// "[]", "#", "None" and "Some".
struct Term {
  struct Var {
    std::string name;
  };
  struct NatLit {
    Nat value;
  };
  struct BoolLit {
    bool value;
  };
  struct UnitLit {};
  struct RefLit {
    RefId id;
  };
  struct Ctor {
    std::string name;
    std::vector<TermPtr> args;
  };
  struct Call {
    std::string fun;
    std::vector<TermPtr> args;
  };
  struct Binary {
    BinOp op;
    TermPtr lhs;
    TermPtr rhs;
  };
  struct Not {
    TermPtr arg;
  };
  struct Tuple {
    std::vector<TermPtr> elems;
  };
  // `arg matches pattern`; the pattern may use the wildcard variable "_".
  struct Matches {
    TermPtr arg;
    TermPtr pattern;
  };

  using Node = std::variant<Var, NatLit, BoolLit, UnitLit, RefLit, Ctor, Call,
                            Binary, Not, Tuple, Matches>;

  Node node;
  SourceLoc loc;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

namespace term {
TermPtr var(std::string name);
TermPtr nat(Nat value);
TermPtr boolean(bool value);
TermPtr unit();
TermPtr ref(RefId id);
TermPtr ctor(std::string name, std::vector<TermPtr> args = {});
TermPtr call(std::string fun, std::vector<TermPtr> args);
TermPtr binary(BinOp op, TermPtr lhs, TermPtr rhs);
TermPtr negate(TermPtr arg);
TermPtr tuple(std::vector<TermPtr> elems);
TermPtr matches(TermPtr arg, TermPtr pattern);
TermPtr nil();
TermPtr cons(TermPtr head, TermPtr tail);
TermPtr none();
TermPtr some(TermPtr arg);
TermPtr list(std::vector<TermPtr> elems);
}  // namespace term

// ---------------------------------------------------------------------------
// Monadic computations
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct CaseBranch {
  std::string ctor;
  std::vector<std::string> vars;
  ExprPtr body;
};

struct Expr {
  struct Return {
    TermPtr value;
  };
  struct Bind {
    std::string var;
    ExprPtr bound;
    ExprPtr body;
  };
  struct If {
    TermPtr cond;
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  struct Case {
    TermPtr scrutinee;
    std::vector<CaseBranch> branches;
  };
  struct SelfCall {
    std::vector<TermPtr> args;
  };
  struct ExtCall {
    std::string fun;
    std::vector<TermPtr> args;
  };
  struct RefNew {
    TermPtr value;
  };
  struct RefGet {
    TermPtr ref;
  };
  struct RefSet {
    TermPtr ref;
    TermPtr value;
  };

  using Node = std::variant<Return, Bind, If, Case, SelfCall, ExtCall, RefNew,
                            RefGet, RefSet>;

  Node node;
  SourceLoc loc;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

namespace expr {
ExprPtr ret(TermPtr value);
ExprPtr bind(std::string var, ExprPtr bound, ExprPtr body);
ExprPtr if_(TermPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr case_(TermPtr scrutinee, std::vector<CaseBranch> branches);
ExprPtr self_call(std::vector<TermPtr> args);
ExprPtr ext_call(std::string fun, std::vector<TermPtr> args);
ExprPtr ref_new(TermPtr value);
ExprPtr ref_get(TermPtr ref);
ExprPtr ref_set(TermPtr ref, TermPtr value);
}  // namespace expr

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

struct Constructor {
  std::string name;
  std::vector<Type> fields;
};

struct DataDecl {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<Constructor> constructors;
};

struct Param {
  std::string name;
  Type type;
};

/// A total, non-recursive helper usable inside pure expressions
/// (`fun step(n : nat) : nat = n div 2`).
struct PureDef {
  std::string name;
  std::vector<Param> params;
  Type result_type;
  TermPtr body;
};

struct FunDef {
  std::string name;
  Monad monad = Monad::Option;
  std::vector<Param> params;
  Type result_type;
  ExprPtr body;
  /// Types of every binder in the body (bind variables and pattern variables),
  /// filled in by the type checker.
  std::map<std::string, Type> local_types;
  /// Binders renamed for uniqueness, mapped back to their source spelling.
  std::map<std::string, std::string> source_names;

  std::string source_name(const std::string& var) const;
};

struct CtorInfo {
  const DataDecl* decl = nullptr;
  const Constructor* ctor = nullptr;
};

struct Program {
  std::vector<DataDecl> data_decls;
  std::vector<PureDef> pure_defs;
  std::vector<FunDef> fun_defs;

  const FunDef* find_fun(std::string_view name) const;
  const PureDef* find_pure(std::string_view name) const;
  const DataDecl* find_data(std::string_view name) const;
  std::optional<CtorInfo> find_ctor(std::string_view name) const;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class StaticError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Scope, Monad, Type };

  StaticError(Kind kind, SourceLoc loc, const std::string& message);

  Kind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  SourceLoc loc_;
  std::string detail_;
};

std::string_view to_string(StaticError::Kind kind);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct ParseOptions {
  /// When false, a reference to the function being defined inside a pure
  /// expression is kept as a Call node instead of being rejected. The
  /// continuity checker then reports it with a precise path.
  bool reject_pure_self_calls = true;
};

Program parse_program(std::string_view source, const ParseOptions& options = {});

/// Parses a whitespace-separated sequence of closed pure expressions, as used
/// for command-line arguments (`Node 1 ref0 [1, 2]`).
std::vector<TermPtr> parse_closed_terms(std::string_view source,
                                        const Program& program);

/// `self_name` is printed for SelfCall nodes.
std::string pretty(const Expr& e, std::string_view self_name = "self");
std::string pretty(const Term& t);
std::string pretty(const Program& p);

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const Term& t);

/// True iff `e` refers to the function `fun` anywhere, either as a SelfCall or
/// as a Call/Var inside a pure expression.
bool mentions_function(const Expr& e, std::string_view fun);
bool mentions_function(const Term& t, std::string_view fun);

bool alpha_equal(const Expr& a, const Expr& b);
bool alpha_equal(const Term& a, const Term& b);
/// Structural equality of programs modulo consistent renaming of binders.
bool alpha_equal(const Program& a, const Program& b);

}  // namespace mfx
