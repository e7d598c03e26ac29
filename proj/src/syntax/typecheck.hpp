#pragma once

#include "mfx/syntax.hpp"

namespace mfx::detail {

/// Checks `fun.body` against its signature and records the type of every
/// binder in `fun.local_types`. The program must already contain every
/// definition `fun` may refer to.
void typecheck_fundef(const Program& program, FunDef& fun);

void typecheck_puredef(const Program& program, const PureDef& def);

/// Validates arity and scoping of a type written in a signature or
/// constructor field. `type_params` lists the rigid variables in scope, or is
/// null when any type variable is allowed.
void validate_type(const Program& program, const Type& t, SourceLoc loc,
                   const std::vector<std::string>* type_params);

/// Arity of a builtin or user constructor, if `name` is one.
std::optional<std::size_t> ctor_arity(const Program& program,
                                      std::string_view name);

}  // namespace mfx::detail
