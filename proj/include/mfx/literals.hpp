#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mfx/domain.hpp"
#include "mfx/syntax.hpp"

namespace mfx {

/// Parses and evaluates a sequence of closed pure expressions
/// (`Node 1 ref0 [1, 2]`). Throws StaticError on malformed input.
std::vector<Value> parse_values(std::string_view text, const Program& program);

/// Parses a heap file: `id ↦ value` bindings (ASCII `|->` also accepted)
/// followed by `next=n`, optionally wrapped as `{…; next=n}`. When `next` is
/// omitted it defaults to one past the largest id.
Heap parse_heap(std::string_view text, const Program& program);

/// The heap in file format, one binding per line.
std::string render_heap_file(const Heap& h);

TermPtr value_to_term(const Value& v);

}  // namespace mfx
