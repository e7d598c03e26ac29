#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mfx/syntax.hpp"

namespace mfx::detail {

struct Token {
  enum class Kind { Ident, TyVar, Number, RefLit, Sym, End };

  Kind kind = Kind::End;
  // Symbols are normalized to their Unicode spelling (`<-` becomes `←`).
  std::string text;
  SourceLoc loc;

  bool is_sym(std::string_view s) const { return kind == Kind::Sym && text == s; }
  bool is_word(std::string_view w) const {
    return kind == Kind::Ident && text == w;
  }
};

/// Splits UTF-8 source into tokens. Throws StaticError(Syntax) on stray
/// characters or unterminated comments.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

std::string describe(const Token& tok);

}  // namespace mfx::detail
