#pragma once

#include <functional>

#include "mfx/audit.hpp"

namespace mfx::detail {

/// Types stored in heap cells reachable from `roots` through `ref τ`.
std::vector<Type> cell_types(const Program& program, const std::vector<Type>& roots);

/// Calls `visit` on every heap of at most bounds.max_cells cells whose cells
/// hold values of the given types; stops early when `visit` returns false.
void for_each_heap(const Program& program, const std::vector<Type>& cells,
                   const DomainBounds& bounds, const std::function<bool(const Heap&)>& visit);

}  // namespace mfx::detail
