#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mfx/domain.hpp"
#include "mfx/syntax.hpp"

namespace mfx {

using Env = std::map<std::string, Value>;

/// Evaluates a pure expression. Total on well-typed input; throws EvalError
/// on shape mismatches and on logic-only constructs.
Value eval_pure(const Program& program, const Term& t, const Env& env);

Value call_pure(const Program& program, const PureDef& def, std::vector<Value> args);

/// The i-th Kleene iterate F^i ⊥ of a function. `ext_fuel` is the cap used
/// to resolve calls to previously defined functions.
struct Approximant {
  const Program* program = nullptr;
  std::string fun_name;
  std::uint64_t fuel = 0;
  std::uint64_t ext_fuel = kDefaultFuelCap;
};

/// Validates arguments and heap against the function's signature.
/// Throws EvalError on arity, type or dangling-reference problems.
void check_call(const Program& program, const FunDef& fun, std::span<const Value> args,
                const Heap& h);

Outcome eval(const Approximant& a, std::span<const Value> args, const Heap& h);

/// Interpretation of SelfCall nodes for a single unfolding of the body.
using SelfHandler = std::function<Outcome(const std::vector<Value>& args, const Heap& h)>;

/// Evaluates the body of `fun` once, answering recursive calls with `self`.
Outcome unfold_once(const Program& program, const FunDef& fun, std::span<const Value> args,
                    const Heap& h, const SelfHandler& self,
                    std::uint64_t ext_fuel = kDefaultFuelCap);

/// [F^0 ⊥, …, F^max_fuel ⊥] at (args, h). Throws ChainViolation if the
/// sequence is not monotone.
Chain approx_chain(const Program& program, const std::string& fun_name,
                   std::span<const Value> args, const Heap& h, std::uint64_t max_fuel);

struct Diverged {
  std::uint64_t fuel_cap = 0;
  bool operator==(const Diverged&) const = default;
};

using LfpResult = std::variant<Outcome, Diverged>;

LfpResult run_lfp(const Program& program, const std::string& fun_name,
                  std::span<const Value> args, const Heap& h,
                  std::uint64_t fuel_cap = kDefaultFuelCap);

/// (h, h', y) ∈ ⟦f args⟧ within the cap. Option functions ignore both heaps.
bool in_semantics(const Program& program, const std::string& fun_name,
                  std::span<const Value> args, const Heap& h, const Heap& h2, const Value& y,
                  std::uint64_t fuel_cap = kDefaultFuelCap);

std::string render(const LfpResult& r);

/// The fuel cap from MFX_FUEL, or the default.
std::uint64_t default_fuel_cap();

}  // namespace mfx
