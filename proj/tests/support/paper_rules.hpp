#pragma once

#include "mfx/induction.hpp"

namespace mfx::testing {

/// The refined rules as displayed in the paper, written out by hand with the
/// predicate named Q and the paper's own variable names.
InductionRule paper_trace_rule();
InductionRule paper_traverse_rule();
InductionRule paper_occurs_rule();

}  // namespace mfx::testing
