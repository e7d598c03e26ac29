#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mfx/domain.hpp"
#include "mfx/syntax.hpp"

namespace mfx::testing {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kSeed = 20240917;

std::string corpus_path(const std::string& name);
std::string read_file(const std::string& path);
Program load_corpus(const std::string& name);

/// A random value of `type`. Type variables are instantiated with nat and
/// references range below `ref_bound`.
Value random_value(const Program& program, const Type& type, Rng& rng, RefId ref_bound,
                   int depth = 2);

/// The type of heap cells reachable from values of `root`, if any.
std::optional<Type> cell_type(const Program& program, const Type& root);

/// A heap of `cells` cells holding random values of `cell`.
Heap random_heap(const Program& program, const Type& cell, Rng& rng, std::size_t cells);

Outcome random_outcome(Rng& rng);

struct Sample {
  std::vector<Value> args;
  Heap heap;
};

/// Random arguments and heaps (heap functions only) for `fun`.
std::vector<Sample> random_samples(const Program& program, const FunDef& fun, Rng& rng,
                                   std::size_t count);

// Oracles ----------------------------------------------------------------------

/// Iterates n ↦ n div 2 until 0, keeping the even values.
std::vector<Value> trace_oracle(std::uint64_t n);

/// Follows Node x r links through the heap until Empty; nothing on a cycle.
std::optional<std::vector<Value>> walk_list(const Heap& h, const Value& start);

/// Whether r1 is reachable from r2 by following stored references.
bool reaches(const Heap& h, RefId r1, RefId r2);

/// Whether the cells reachable from r contain a cycle.
bool has_cycle_from(const Heap& h, RefId r);

}  // namespace mfx::testing
