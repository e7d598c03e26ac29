#include "mfx/audit.hpp"
#include "syntax/parser.hpp"

namespace mfx {

QSpec parse_qspec(std::string_view text, const Program& program) {
  Program scratch = program;
  detail::Parser parser(text, scratch);
  parser.set_mode(detail::Parser::TermMode::Logic);

  const auto& head = parser.expect_ident();
  if (head.text != "Q") parser.fail(StaticError::Kind::Syntax, head.loc, "a spec starts with 'Q('");
  parser.expect_sym("(");
  QSpec spec;
  if (!parser.accept_sym(")")) {
    do {
      const auto& p = parser.expect_ident();
      for (const auto& seen : spec.params) {
        if (seen == p.text) {
          parser.fail(StaticError::Kind::Scope, p.loc, "parameter '" + p.text + "' repeated");
        }
      }
      spec.params.push_back(p.text);
      parser.push_var(p.text);
    } while (parser.accept_sym(","));
    parser.expect_sym(")");
  }
  parser.expect_sym("=");
  spec.body = parser.parse_term();
  if (!parser.at_end()) parser.fail_here("unexpected input after the spec body");
  return spec;
}

}  // namespace mfx
