#include <gtest/gtest.h>

#include "mfx/continuity.hpp"
#include "mfx/evaluator.hpp"
#include "support.hpp"

namespace mfx {
namespace {

Derivation derive(const FunDef& f) {
  ContinuityResult r = check_continuous(f);
  if (const auto* fail = std::get_if<ContinuityFailure>(&r)) {
    ADD_FAILURE() << f.name << " not continuous at " << fail->path_string() << ": "
                  << fail->reason;
    return {};
  }
  return std::get<Derivation>(r);
}

ContinuityFailure failure(const std::string& src) {
  ParseOptions lenient;
  lenient.reject_pure_self_calls = false;
  Program p = parse_program(src, lenient);
  ContinuityResult r = check_continuous(p.fun_defs.back());
  if (!std::holds_alternative<ContinuityFailure>(r)) {
    ADD_FAILURE() << "expected a continuity failure";
    return {};
  }
  return std::get<ContinuityFailure>(r);
}

TEST(Continuity, TraceDerivation) {
  Program p = testing::load_corpus("trace.mfx");
  Derivation d = derive(p.fun_defs[0]);
  EXPECT_EQ(preorder(d), (std::vector<Rule>{Rule::Lam, Rule::If, Rule::Const, Rule::Bind,
                                            Rule::Rec, Rule::Const}));
  EXPECT_EQ(shape(d), "LAM▸IF▸[CONST, BIND▸[REC, CONST]]");
}

TEST(Continuity, ExplainListsOneNodePerLine) {
  Program p = testing::load_corpus("trace.mfx");
  std::string text = explain(derive(p.fun_defs[0]), "trace");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  EXPECT_EQ(text.rfind("(Lam) ", 0), 0u);
  EXPECT_NE(text.find("\n      (Rec) trace(step(n))\n"), std::string::npos);
}

TEST(Continuity, ExplainIsDeterministic) {
  Program p = testing::load_corpus("occurs.mfx");
  EXPECT_EQ(explain(derive(p.fun_defs[0])), explain(derive(p.fun_defs[0])));
}

TEST(Continuity, HeapCorpusUsesCaseRule) {
  Program traverse = testing::load_corpus("traverse.mfx");
  EXPECT_EQ(shape(derive(traverse.fun_defs[0])), "LAM▸CASE▸[CONST, BIND▸[CONST, BIND▸[REC, CONST]]]");
  Program occurs = testing::load_corpus("occurs.mfx");
  std::vector<Rule> rules = preorder(derive(occurs.fun_defs[0]));
  EXPECT_EQ(std::count(rules.begin(), rules.end(), Rule::Case), 2);
  EXPECT_EQ(std::count(rules.begin(), rules.end(), Rule::Rec), 3);
}

TEST(Continuity, SelfCallInsideReturnIsRejectedWithPath) {
  ContinuityFailure f = failure(
      "option fun f(n : nat) : nat =\n"
      "  if n = 0 then return 0 else do x ← return (f(n) + 1); return x done");
  EXPECT_EQ(f.path_string(), "body.else.bind.ret.lhs");
  EXPECT_FALSE(f.reason.empty());
}

TEST(Continuity, SelfCallInConditionIsRejected) {
  ContinuityFailure f = failure("option fun f(n : nat) : bool = if f(n) then return True else return False");
  EXPECT_EQ(f.path.front(), "body");
  EXPECT_EQ(f.path.back(), "cond");
}

TEST(Continuity, ExternalCallsAreConstants) {
  Program p = parse_program(
      "option fun g(n : nat) : nat = return n\n"
      "option fun f(n : nat) : nat = do x ← g(n); f(x) done");
  EXPECT_EQ(shape(derive(p.fun_defs[1])), "LAM▸BIND▸[CONST, REC]");
}

TEST(Continuity, SoundnessSurrogateOnCorpus) {
  testing::Rng rng(testing::kSeed + 2);
  for (const char* name : {"trace.mfx", "traverse.mfx", "occurs.mfx"}) {
    Program p = testing::load_corpus(name);
    const FunDef& f = p.fun_defs.back();
    ASSERT_TRUE(std::holds_alternative<Derivation>(check_continuous(f)));
    for (const auto& s : testing::random_samples(p, f, rng, 50)) {
      Chain c = approx_chain(p, f.name, s.args, s.heap, 12);
      EXPECT_FALSE(first_chain_violation(c).has_value()) << name;
    }
  }
}

}  // namespace
}  // namespace mfx
