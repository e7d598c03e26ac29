#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mfx {

/// Unbounded natural number. Subtraction truncates at zero.
using Nat = boost::multiprecision::cpp_int;

using RefId = std::uint64_t;

inline constexpr std::uint64_t kDefaultFuelCap = 1000;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

/// Raised when a runtime operation is applied to values of the wrong shape,
/// e.g. a caller passing a list where a nat is expected.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfx
