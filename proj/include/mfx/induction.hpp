#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfx/continuity.hpp"
#include "mfx/syntax.hpp"

namespace mfx {

/// A premise of a proof obligation. Logical content is carried by terms in
/// the same representation as program terms, with these conventions:
///  - the predicate is a Call named "Q", the heap selectors are Calls to
///    get_ref / set_ref / new_ref_with, and a call of a monadic function is a
///    Call to that function;
///  - Sem encodes `lhs ∈ ⟦rhs⟧` with lhs = (h, h', y) as a Tuple.
struct Premise {
  enum class Kind {
    Eq,          // lhs = rhs
    Cond,        // term, possibly a negation
    HeapGet,     // lhs = get_ref r h
    HeapEq,      // explicit-heap equation, e.g. h' = set_ref r v h
    Hyp,         // specialized induction hypothesis Q …
    OptEq,       // g args = Some y
    Sem,         // (h, h', y) ∈ ⟦g args⟧
    GeneralHyp,  // ⋀binders. lhs ⊨ rhs ⟹ term   (raw rules only)
    Body,        // F f x = Some y, or (h, h', y) ∈ ⟦F f x⟧  (raw rules only)
  };

  Kind kind = Kind::Eq;
  TermPtr lhs;
  TermPtr rhs;
  TermPtr term;
  std::vector<std::string> binders;
  ExprPtr body;

  static Premise eq(Kind k, TermPtr lhs, TermPtr rhs) { return {k, lhs, rhs, nullptr, {}, nullptr}; }
  static Premise cond(TermPtr t) { return {Kind::Cond, nullptr, nullptr, t, {}, nullptr}; }
  static Premise hyp(TermPtr q) { return {Kind::Hyp, nullptr, nullptr, q, {}, nullptr}; }
};

std::string_view to_string(Premise::Kind k);

struct TypedVar {
  std::string name;
  Type type;
};

struct Obligation {
  std::vector<TypedVar> vars;
  std::vector<Premise> premises;
  TermPtr conclusion;
};

struct InductionRule {
  enum class Kind { Raw, Refined };

  Kind kind = Kind::Refined;
  std::string function;
  Monad monad = Monad::Option;
  std::vector<Obligation> obligations;
  /// The rule's conclusion `schema_premise ⟹ schema_conclusion`, e.g.
  /// `trace n = Some ys ⟹ Q n ys`.
  Premise schema_premise;
  TermPtr schema_conclusion;
  /// Names used in the schema, in order: parameters, then (heap mode) the
  /// pre- and post-heap, then the result.
  std::vector<TypedVar> schema_vars;
};

class NotContinuous : public std::runtime_error {
 public:
  explicit NotContinuous(const ContinuityFailure& f);
};

InductionRule raw_rule(const Program& program, const FunDef& f);

/// Splits the raw rule into one obligation per control-flow path of the
/// body and simplifies each.
InductionRule refine(const Program& program, const InductionRule& raw, const FunDef& f,
                     const Derivation& derivation);

/// raw_rule followed by refine, checking continuity first.
InductionRule refined_rule(const Program& program, const FunDef& f);

// Rendering -------------------------------------------------------------------

/// Isabelle-style rendering: application by juxtaposition, `x # xs`.
std::string render_logic(const Term& t);
std::string render_premise(const Premise& p, const InductionRule& rule);
std::string render_obligation(const Obligation& o, const InductionRule& rule);
std::string render_text(const InductionRule& rule);
std::string render_json(const InductionRule& rule);

/// Inverse of render_json. Throws std::runtime_error on malformed input.
InductionRule parse_rule_json(const std::string& text);

/// Exact structural equality (names included).
bool same_structure(const InductionRule& a, const InductionRule& b);

/// Alpha-equivalence of rules: obligations in order, bound variables up to a
/// consistent renaming, premises as a multiset, equations up to symmetry.
/// On mismatch, `why` receives a short explanation.
bool rules_alpha_equivalent(const InductionRule& a, const InductionRule& b,
                            std::string* why = nullptr);

bool obligations_alpha_equivalent(const Obligation& a, const Obligation& b);

/// Free variables of a premise, excluding its own binders.
std::set<std::string> premise_vars(const Premise& p);

}  // namespace mfx
