#include "syntax/lexer.hpp"

#include <array>
#include <utility>

namespace mfx::detail {
namespace {

constexpr std::array kKeywords = {
    "datatype", "option", "heap", "fun",   "return", "do",    "done",
    "if",       "then",   "else", "case",  "of",     "ref",   "div",
    "mod",      "True",   "False", "true", "false",  "not",   "matches",
};

// Multi-character ASCII spellings and their canonical form. Longest first.
constexpr std::array<std::pair<std::string_view, std::string_view>, 14> kAsciiSyms = {{
    {"|->", "↦"},
    {"-->", "⟶"},
    {"<-", "←"},
    {"=>", "⇒"},
    {"!=", "≠"},
    {"~=", "≠"},
    {"&&", "∧"},
    {"||", "∨"},
    {"/\\", "∧"},
    {"\\/", "∨"},
    {":=", ":="},
    {"==>", "⟹"},
    {"->", "→"},
    {"~", "¬"},
}};

constexpr std::array<std::string_view, 12> kUnicodeSyms = {
    "←", "⇒", "≠", "∧", "∨", "¬", "↦", "⟶", "⟹", "→", "⋀", "⟦",
};

constexpr std::string_view kSingleSyms = "()[],;:=<|#+-!._{}";

struct Cursor {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  bool done() const { return pos >= src.size(); }

  // Length in bytes of the UTF-8 sequence starting at pos.
  std::size_t char_len() const {
    auto c = static_cast<unsigned char>(src[pos]);
    if (c < 0x80) return 1;
    if ((c >> 5) == 0x6) return 2;
    if ((c >> 4) == 0xE) return 3;
    if ((c >> 3) == 0x1E) return 4;
    return 1;
  }

  void advance(std::size_t bytes) {
    std::size_t end = pos + bytes;
    while (pos < end && pos < src.size()) {
      if (src[pos] == '\n') {
        ++line;
        column = 1;
        ++pos;
        continue;
      }
      std::size_t n = char_len();
      pos += n;
      ++column;
    }
  }

  bool starts_with(std::string_view s) const {
    return src.substr(pos).starts_with(s);
  }

  SourceLoc loc() const { return {line, column}; }
};

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_unicode_sym_at(const Cursor& cur) {
  for (auto s : kUnicodeSyms) {
    if (cur.starts_with(s)) return true;
  }
  return false;
}

bool ident_start(const Cursor& cur) {
  char c = cur.src[cur.pos];
  if (is_ascii_alpha(c)) return true;
  return static_cast<unsigned char>(c) >= 0x80 && !is_unicode_sym_at(cur);
}

bool ident_continue(const Cursor& cur) {
  char c = cur.src[cur.pos];
  return ident_start(cur) || is_digit(c) || c == '_' || c == '\'';
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  return true;
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case Token::Kind::End:
      return "end of input";
    case Token::Kind::Ident:
      return is_keyword(tok.text) ? "keyword '" + tok.text + "'"
                                  : "identifier '" + tok.text + "'";
    default:
      return "'" + tok.text + "'";
  }
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  Cursor cur{source};

  while (!cur.done()) {
    char c = cur.src[cur.pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cur.advance(1);
      continue;
    }
    if (cur.starts_with("(*")) {
      SourceLoc start = cur.loc();
      int depth = 0;
      do {
        if (cur.starts_with("(*")) {
          ++depth;
          cur.advance(2);
        } else if (cur.starts_with("*)")) {
          --depth;
          cur.advance(2);
        } else if (cur.done()) {
          throw StaticError(StaticError::Kind::Syntax, start,
                            "unterminated comment");
        } else {
          cur.advance(cur.char_len());
        }
      } while (depth > 0);
      continue;
    }
    if (cur.starts_with("--") && !cur.starts_with("-->")) {
      while (!cur.done() && cur.src[cur.pos] != '\n') cur.advance(1);
      continue;
    }

    Token tok;
    tok.loc = cur.loc();
    std::size_t start = cur.pos;

    if (is_digit(c)) {
      while (!cur.done() && is_digit(cur.src[cur.pos])) cur.advance(1);
      tok.kind = Token::Kind::Number;
      tok.text = std::string(source.substr(start, cur.pos - start));
      out.push_back(std::move(tok));
      continue;
    }
    if (c == '\'') {
      cur.advance(1);
      if (cur.done() || !ident_start(cur)) {
        throw StaticError(StaticError::Kind::Syntax, tok.loc,
                          "expected a type variable name after '");
      }
      while (!cur.done() && ident_continue(cur)) cur.advance(cur.char_len());
      tok.kind = Token::Kind::TyVar;
      tok.text = std::string(source.substr(start, cur.pos - start));
      out.push_back(std::move(tok));
      continue;
    }
    if (ident_start(cur)) {
      while (!cur.done() && ident_continue(cur)) cur.advance(cur.char_len());
      tok.text = std::string(source.substr(start, cur.pos - start));
      if (tok.text.size() > 3 && tok.text.starts_with("ref") &&
          all_digits(std::string_view(tok.text).substr(3))) {
        tok.kind = Token::Kind::RefLit;
        tok.text = tok.text.substr(3);
      } else {
        tok.kind = Token::Kind::Ident;
      }
      out.push_back(std::move(tok));
      continue;
    }

    tok.kind = Token::Kind::Sym;
    bool matched = false;
    for (auto s : kUnicodeSyms) {
      if (cur.starts_with(s)) {
        tok.text = std::string(s);
        cur.advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      for (auto [ascii, canon] : kAsciiSyms) {
        if (cur.starts_with(ascii)) {
          tok.text = std::string(canon);
          cur.advance(ascii.size());
          matched = true;
          break;
        }
      }
    }
    if (!matched && kSingleSyms.find(c) != std::string_view::npos) {
      tok.text = std::string(1, c);
      cur.advance(1);
      matched = true;
    }
    if (!matched) {
      throw StaticError(StaticError::Kind::Syntax, tok.loc,
                        "unexpected character '" +
                            std::string(source.substr(start, cur.char_len())) +
                            "'");
    }
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = Token::Kind::End;
  end.loc = cur.loc();
  out.push_back(std::move(end));
  return out;
}

}  // namespace mfx::detail
