#include "mfx/literals.hpp"

#include "mfx/evaluator.hpp"
#include "syntax/parser.hpp"

namespace mfx {

namespace {

Value eval_closed(const Program& program, const Term& t) {
  try {
    return eval_pure(program, t, {});
  } catch (const EvalError& e) {
    throw StaticError(StaticError::Kind::Type, t.loc, e.what());
  }
}

}  // namespace

std::vector<Value> parse_values(std::string_view text, const Program& program) {
  std::vector<Value> out;
  for (const auto& t : parse_closed_terms(text, program)) out.push_back(eval_closed(program, *t));
  return out;
}

Heap parse_heap(std::string_view text, const Program& program) {
  Program scratch = program;
  detail::Parser p(text, scratch);
  p.set_mode(detail::Parser::TermMode::Closed);

  Heap h;
  bool braced = p.accept_sym("{");
  std::optional<RefId> next;
  while (!p.at_end() && !p.peek().is_sym("}")) {
    if (p.peek().is_word("next")) {
      p.advance();
      p.expect_sym("=");
      const auto& tok = p.peek();
      if (tok.kind != detail::Token::Kind::Number) p.fail_here("expected a number after 'next='");
      next = std::stoull(p.advance().text);
      continue;
    }
    const auto& id_tok = p.peek();
    if (id_tok.kind != detail::Token::Kind::Number) {
      p.fail_here("expected 'id ↦ value' or 'next=n' but found " + detail::describe(id_tok));
    }
    SourceLoc loc = id_tok.loc;
    RefId id = std::stoull(p.advance().text);
    if (!p.accept_sym("↦")) p.fail_here("expected '↦' after heap id");
    TermPtr t = p.parse_term();
    if (h.store.count(id)) {
      p.fail(StaticError::Kind::Scope, loc, "heap cell " + std::to_string(id) + " bound twice");
    }
    h.store[id] = eval_closed(program, *t);
    if (!p.accept_sym(",")) p.accept_sym(";");
  }
  if (braced) p.expect_sym("}");
  if (!p.at_end()) p.fail_here("unexpected " + detail::describe(p.peek()) + " after heap");

  RefId max_next = h.store.empty() ? 0 : h.store.rbegin()->first + 1;
  if (next && *next < max_next) {
    p.fail(StaticError::Kind::Scope, {},
           "next=" + std::to_string(*next) + " is not above every allocated id");
  }
  h.next = next.value_or(max_next);
  if (!heap_well_formed(h)) {
    p.fail(StaticError::Kind::Scope, {}, "heap contains a dangling reference");
  }
  return h;
}

std::string render_heap_file(const Heap& h) {
  std::string out;
  for (const auto& [id, v] : h.store) out += std::to_string(id) + " ↦ " + render(v) + "\n";
  return out + "next=" + std::to_string(h.next) + "\n";
}

TermPtr value_to_term(const Value& v) {
  return std::visit(
      [&](const auto& x) -> TermPtr {
        using N = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<N, Value::Unit>) {
          return term::unit();
        } else if constexpr (std::is_same_v<N, bool>) {
          return term::boolean(x);
        } else if constexpr (std::is_same_v<N, Nat>) {
          return term::nat(x);
        } else if constexpr (std::is_same_v<N, Value::ListV>) {
          std::vector<TermPtr> elems;
          for (const auto& e : x.elems) elems.push_back(value_to_term(e));
          return term::list(std::move(elems));
        } else if constexpr (std::is_same_v<N, Value::OptionV>) {
          if (x.inner.empty()) return term::none();
          return term::some(value_to_term(x.inner[0]));
        } else if constexpr (std::is_same_v<N, Value::CtorV>) {
          std::vector<TermPtr> args;
          for (const auto& a : x.args) args.push_back(value_to_term(a));
          return term::ctor(x.name, std::move(args));
        } else {
          return term::ref(x.id);
        }
      },
      v.node);
}

}  // namespace mfx
