#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mfx/syntax.hpp"

namespace mfx {

enum class Rule { Lam, Bind, Const, Rec, If, Case };

std::string_view to_string(Rule r);

struct Derivation {
  Rule rule = Rule::Const;
  ExprPtr subject;
  std::vector<Derivation> children;
};

struct ContinuityFailure {
  /// Segments such as body, then, else, bind, cont, branch0, arg1.
  std::vector<std::string> path;
  std::string reason;

  std::string path_string() const;
};

using ContinuityResult = std::variant<Derivation, ContinuityFailure>;

ContinuityResult check_continuous(const FunDef& f);

/// One line per node, `(Rule) subject`, indented two spaces per level.
std::string explain(const Derivation& d, std::string_view self_name = "self");

/// Rules of the derivation in preorder.
std::vector<Rule> preorder(const Derivation& d);

/// Compact bracketed form, e.g. `LAM▸IF▸[CONST, BIND▸[REC, CONST]]`.
std::string shape(const Derivation& d);

}  // namespace mfx
