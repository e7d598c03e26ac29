#pragma once

#include <map>
#include <string>

#include "mfx/induction.hpp"

namespace mfx::detail {

inline const std::string* var_name(const Term& t) {
  const auto* v = t.as<Term::Var>();
  return v ? &v->name : nullptr;
}

/// Simultaneous substitution of variables by terms.
TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub);
Premise substitute(const Premise& p, const std::map<std::string, TermPtr>& sub);

bool occurs_in(const std::string& var, const Term& t);

/// `Q a b c`
TermPtr q_app(std::vector<TermPtr> args);

}  // namespace mfx::detail
