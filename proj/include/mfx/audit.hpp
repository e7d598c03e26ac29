#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfx/domain.hpp"
#include "mfx/induction.hpp"
#include "mfx/syntax.hpp"

namespace mfx {

/// An executable predicate `Q(x₁, …, xₖ) = body`. The body is a pure
/// expression over the parameters, extended with tuples, `matches` patterns
/// and the logic builtins get_ref, set_ref, new_ref_with, occurs_in,
/// heap_list, filter, orbit and length.
struct QSpec {
  std::vector<std::string> params;
  TermPtr body;
};

QSpec parse_qspec(std::string_view text, const Program& program);

/// Values seen by the logic interpreter: program values, heaps, tuples and
/// references to pure functions (for filter / orbit).
struct LogicValue {
  struct Tuple {
    std::vector<LogicValue> elems;
  };
  struct FunRef {
    std::string name;
  };
  using Node = std::variant<Value, Heap, Tuple, FunRef>;
  Node node;

  bool operator==(const LogicValue& o) const;
};

std::string render(const LogicValue& v);

using LogicEnv = std::map<std::string, LogicValue>;

/// A logic term could not be given a value, e.g. get_ref of an unallocated
/// reference or an orbit that never reaches 0.
class Undefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LogicValue eval_logic(const Program& program, const Term& t, const LogicEnv& env,
                      std::uint64_t fuel_cap);

/// The builtin relation: r₁ is reachable from r₂ through instantiated
/// variables and application arguments.
bool occurs_in(const Heap& h, RefId r1, RefId r2);

/// The list stored in a linked list of nodes starting at `p`, or nothing if
/// the list is cyclic.
std::optional<std::vector<Value>> heap_list(const Heap& h, const Value& p);

struct DomainBounds {
  std::uint64_t nat_count = 8;      // naturals 0 … nat_count-1
  std::uint64_t max_list_len = 2;
  std::uint64_t max_cells = 3;      // heaps and references
  std::uint64_t max_depth = 2;      // nesting of non-reference datatypes
  std::uint64_t fuel = 64;          // fuel cap for running the function
  std::uint64_t budget = 50'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t budget);
};

using Witness = std::vector<std::pair<std::string, std::string>>;

struct Verdict {
  bool obligations_hold = true;
  std::size_t failed_obligation = 0;  // 1-based, when !obligations_hold
  Witness obligation_witness;
  std::uint64_t assignments_checked = 0;

  bool conclusion_holds = true;
  Witness conclusion_witness;
  std::uint64_t inputs = 0;
  std::uint64_t terminating = 0;

  bool sound_on_slice() const { return !obligations_hold || conclusion_holds; }
};

/// Audits a refined rule against Q on a bounded domain: every obligation is
/// checked by enumeration, and independently Q is checked on every input for
/// which the function terminates within `bounds.fuel`.
Verdict check_rule_sampled(const Program& program, const InductionRule& rule, const QSpec& q,
                           const DomainBounds& bounds);

std::string render_text(const Verdict& v);
std::string render_json(const Verdict& v);

/// Every value of `type` within the bounds; references range below
/// `ref_bound`. Heaps are not values and are rejected.
std::vector<Value> enumerate_values(const Program& program, const Type& type,
                                    const DomainBounds& bounds, std::uint64_t ref_bound);

}  // namespace mfx
