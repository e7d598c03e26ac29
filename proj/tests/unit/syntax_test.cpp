#include <gtest/gtest.h>

#include "mfx/literals.hpp"
#include "mfx/syntax.hpp"
#include "support.hpp"

namespace mfx {
namespace {

using testing::load_corpus;

StaticError::Kind error_kind(const std::string& src) {
  try {
    parse_program(src);
  } catch (const StaticError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a static error for:\n" << src;
  return StaticError::Kind::Syntax;
}

TEST(Syntax, ParsesCorpus) {
  Program trace = load_corpus("trace.mfx");
  EXPECT_EQ(trace.pure_defs.size(), 2u);
  ASSERT_EQ(trace.fun_defs.size(), 1u);
  EXPECT_EQ(trace.fun_defs[0].name, "trace");
  EXPECT_EQ(trace.fun_defs[0].monad, Monad::Option);

  Program traverse = load_corpus("traverse.mfx");
  ASSERT_NE(traverse.find_data("node"), nullptr);
  EXPECT_EQ(traverse.find_fun("traverse")->monad, Monad::Heap);

  Program occurs = load_corpus("occurs.mfx");
  ASSERT_NE(occurs.find_data("rtrm"), nullptr);
  EXPECT_EQ(occurs.find_data("rtrm")->constructors.size(), 3u);
  EXPECT_EQ(occurs.find_fun("occurs")->params.size(), 2u);
}

TEST(Syntax, PrettyParseRoundTrip) {
  for (const char* name : {"trace.mfx", "traverse.mfx", "occurs.mfx"}) {
    Program p = load_corpus(name);
    std::string text = pretty(p);
    Program back = parse_program(text);
    EXPECT_TRUE(alpha_equal(p, back)) << name << "\n" << text;
    EXPECT_EQ(pretty(back), text) << name;
  }
}

TEST(Syntax, AlphaEqualityIgnoresBinderNames) {
  Program a = parse_program(
      "option fun f(n : nat) : nat = do x ← f(n); return x done");
  Program b = parse_program(
      "option fun f(m : nat) : nat = do y ← f(m); return y done");
  Program c = parse_program(
      "option fun f(m : nat) : nat = do y ← f(m); return m done");
  EXPECT_TRUE(alpha_equal(a, b));
  EXPECT_FALSE(alpha_equal(a, c));
}

TEST(Syntax, AsciiSpellingsAreAccepted) {
  Program a = parse_program("option fun f(n : nat) : nat = do x <- f(n); return x done");
  Program b = parse_program("option fun f(n : nat) : nat = do x ← f(n); return x done");
  EXPECT_TRUE(alpha_equal(a, b));
}

TEST(Syntax, ScopeErrors) {
  EXPECT_EQ(error_kind("option fun f(n : nat) : nat = return m"), StaticError::Kind::Scope);
  EXPECT_EQ(error_kind("option fun f(n : nat) : nat = g(n)"), StaticError::Kind::Scope);
  EXPECT_EQ(error_kind("option fun f(n : nat) : nat = return n\n"
                       "option fun f(n : nat) : nat = return n"),
            StaticError::Kind::Scope);
}

TEST(Syntax, HeapOperationsNeedTheHeapMonad) {
  EXPECT_EQ(error_kind("option fun f(r : nat ref) : nat = !r"), StaticError::Kind::Monad);
  EXPECT_NO_THROW(parse_program("heap fun f(r : nat ref) : nat = !r"));
}

TEST(Syntax, TypeErrors) {
  EXPECT_EQ(error_kind("option fun f(n : nat) : nat = return (n + True)"),
            StaticError::Kind::Type);
  EXPECT_EQ(error_kind("option fun f(n : nat) : bool = return n"), StaticError::Kind::Type);
}

TEST(Syntax, SyntaxErrorsCarryLocations) {
  try {
    parse_program("option fun f(n : nat) : nat =\n  if n then");
    FAIL() << "expected a syntax error";
  } catch (const StaticError& e) {
    EXPECT_EQ(e.kind(), StaticError::Kind::Syntax);
    EXPECT_EQ(e.loc().line, 2);
  }
}

TEST(Syntax, SelfCallInPureExpression) {
  const std::string src = "option fun f(n : nat) : nat = return (f(n) + 1)";
  EXPECT_THROW(parse_program(src), StaticError);
  ParseOptions lenient;
  lenient.reject_pure_self_calls = false;
  Program p = parse_program(src, lenient);
  EXPECT_TRUE(mentions_function(*p.fun_defs[0].body, "f"));
}

TEST(Syntax, ClosedValueLiterals) {
  Program p = load_corpus("traverse.mfx");
  std::vector<Value> vs = parse_values("Node 1 ref0 [1, 2] 3", p);
  ASSERT_EQ(vs.size(), 3u);
  EXPECT_EQ(vs[0], Value::ctor("Node", {Value::nat(1), Value::ref(0)}));
  EXPECT_EQ(vs[1], Value::list({Value::nat(1), Value::nat(2)}));
  EXPECT_EQ(vs[2], Value::nat(3));
  EXPECT_THROW(parse_values("Node 1 x", p), StaticError);
}

TEST(Syntax, HeapFiles) {
  Program p = load_corpus("traverse.mfx");
  Heap h = parse_heap(testing::read_file(testing::corpus_path("acyclic.heap")), p);
  EXPECT_EQ(h.next, 2u);
  EXPECT_EQ(h.store.at(1), Value::ctor("Empty"));
  Heap back = parse_heap(render_heap_file(h), p);
  EXPECT_EQ(back, h);
  EXPECT_EQ(parse_heap("{0 |-> Empty; next=1}", p).store.at(0), Value::ctor("Empty"));
}

TEST(Syntax, FreeVariables) {
  Program p = load_corpus("trace.mfx");
  EXPECT_TRUE(free_vars(*p.fun_defs[0].body).count("n"));
  EXPECT_FALSE(free_vars(*p.fun_defs[0].body).count("tl"));
}

}  // namespace
}  // namespace mfx
