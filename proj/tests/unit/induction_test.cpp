#include <gtest/gtest.h>

#include "mfx/induction.hpp"
#include "paper_rules.hpp"
#include "support.hpp"

namespace mfx {
namespace {

InductionRule refined(const std::string& corpus_file) {
  Program p = testing::load_corpus(corpus_file);
  return refined_rule(p, p.fun_defs.back());
}

std::vector<Premise::Kind> kinds(const Obligation& o) {
  std::vector<Premise::Kind> out;
  for (const auto& p : o.premises) out.push_back(p.kind);
  return out;
}

void expect_matches_paper(const InductionRule& got, const InductionRule& paper) {
  std::string why;
  EXPECT_TRUE(rules_alpha_equivalent(got, paper, &why)) << why << "\n" << render_text(got);
}

TEST(Induction, TraceMatchesPaper) {
  InductionRule r = refined("trace.mfx");
  EXPECT_EQ(r.kind, InductionRule::Kind::Refined);
  ASSERT_EQ(r.obligations.size(), 3u);
  expect_matches_paper(r, testing::paper_trace_rule());
}

TEST(Induction, TraverseMatchesPaper) {
  InductionRule r = refined("traverse.mfx");
  ASSERT_EQ(r.obligations.size(), 2u);
  expect_matches_paper(r, testing::paper_traverse_rule());
}

TEST(Induction, OccursMatchesPaper) {
  InductionRule r = refined("occurs.mfx");
  ASSERT_EQ(r.obligations.size(), 6u);
  expect_matches_paper(r, testing::paper_occurs_rule());
}

TEST(Induction, TraceRendering) {
  EXPECT_EQ(render_text(refined("trace.mfx")),
            "Q 0 []\n"
            "⋀n tl. n ≠ 0 ⟹ Q (step n) tl ⟹ even n ⟹ Q n (n # tl)\n"
            "⋀n tl. n ≠ 0 ⟹ Q (step n) tl ⟹ ¬ even n ⟹ Q n tl\n"
            "────────────────────────────────────────────────────\n"
            "trace n = Some ys ⟹ Q n ys\n");
}

TEST(Induction, PremisesFollowEvaluationOrder) {
  InductionRule trace = refined("trace.mfx");
  using K = Premise::Kind;
  EXPECT_EQ(kinds(trace.obligations[1]), (std::vector<K>{K::Cond, K::Hyp, K::Cond}));
  InductionRule occurs = refined("occurs.mfx");
  EXPECT_EQ(kinds(occurs.obligations[1]), (std::vector<K>{K::HeapGet, K::Cond}));
  EXPECT_EQ(kinds(occurs.obligations[5]),
            (std::vector<K>{K::HeapGet, K::Hyp, K::Cond, K::Hyp}));
}

TEST(Induction, ComparatorRejectsChangedRules) {
  InductionRule paper = testing::paper_trace_rule();
  InductionRule got = refined("trace.mfx");

  InductionRule dropped = got;
  dropped.obligations[1].premises.pop_back();
  std::string why;
  EXPECT_FALSE(rules_alpha_equivalent(dropped, paper, &why));
  EXPECT_NE(why.find("obligation 2"), std::string::npos) << why;

  InductionRule swapped = got;
  std::swap(swapped.obligations[1], swapped.obligations[2]);
  EXPECT_FALSE(rules_alpha_equivalent(swapped, paper));

  InductionRule renamed_badly = got;
  auto& c = renamed_badly.obligations[2].conclusion;
  c = term::call("Q", {term::var("tl"), term::var("n")});
  EXPECT_FALSE(rules_alpha_equivalent(renamed_badly, paper));

  InductionRule other = got;
  other.function = "other";
  EXPECT_FALSE(rules_alpha_equivalent(other, paper));
}

TEST(Induction, ComparatorIsAlphaAndOrderInsensitive) {
  Obligation a;
  a.vars = {{"x", Type::nat()}, {"y", Type::nat()}};
  a.premises = {Premise::cond(term::var("x")), Premise::hyp(term::call("Q", {term::var("y")}))};
  a.conclusion = term::call("Q", {term::var("x")});
  Obligation b;
  b.vars = {{"u", Type::nat()}, {"v", Type::nat()}};
  b.premises = {Premise::hyp(term::call("Q", {term::var("v")})), Premise::cond(term::var("u"))};
  b.conclusion = term::call("Q", {term::var("u")});
  EXPECT_TRUE(obligations_alpha_equivalent(a, b));
  b.conclusion = term::call("Q", {term::var("v")});
  EXPECT_FALSE(obligations_alpha_equivalent(a, b));
}

TEST(Induction, RawRuleShape) {
  Program p = testing::load_corpus("trace.mfx");
  InductionRule raw = raw_rule(p, p.fun_defs[0]);
  EXPECT_EQ(raw.kind, InductionRule::Kind::Raw);
  ASSERT_EQ(raw.obligations.size(), 1u);
  const Obligation& o = raw.obligations[0];
  ASSERT_EQ(o.premises.size(), 2u);
  EXPECT_EQ(o.premises[0].kind, Premise::Kind::GeneralHyp);
  EXPECT_EQ(o.premises[1].kind, Premise::Kind::Body);
  EXPECT_EQ(render_text(raw).substr(0, render_text(raw).find('\n')),
            "⋀trace n ys. (⋀z r. trace z = Some r ⟹ Q z r) ⟹ (if n = 0 then return [] else do "
            "tl ← trace(step(n)); if even(n) then return n # tl else return tl done) = Some ys "
            "⟹ Q n ys");
}

TEST(Induction, RawRuleInHeapMode) {
  Program p = testing::load_corpus("traverse.mfx");
  InductionRule raw = raw_rule(p, p.fun_defs[0]);
  std::string first = render_text(raw).substr(0, render_text(raw).find('\n'));
  EXPECT_EQ(first.rfind("⋀traverse p h h' ys. (⋀z g g' r1. (g, g', r1) ∈ ⟦traverse z⟧ ⟹ Q z g g' r1)", 0),
            0u)
      << first;
}

TEST(Induction, WritesAndAllocations) {
  Program p = parse_program(
      "heap fun bump(r : nat ref) : nat = do n ← !r; r := n + 1; return n done\n"
      "heap fun fresh(n : nat) : nat ref = ref n");
  InductionRule bump = refined_rule(p, *p.find_fun("bump"));
  ASSERT_EQ(bump.obligations.size(), 1u);
  EXPECT_EQ(render_obligation(bump.obligations[0], bump),
            "⋀r h. Q r h (set_ref r (get_ref r h + 1) h) (get_ref r h)");
  InductionRule fresh = refined_rule(p, *p.find_fun("fresh"));
  ASSERT_EQ(fresh.obligations.size(), 1u);
  EXPECT_EQ(render_obligation(fresh.obligations[0], fresh),
            "⋀n h h' y. (y, h') = new_ref_with n h ⟹ Q n h h' y");
}

TEST(Induction, NotContinuousFunctionsHaveNoRule) {
  ParseOptions lenient;
  lenient.reject_pure_self_calls = false;
  Program p = parse_program("option fun f(n : nat) : nat = return (f(n) + 1)", lenient);
  EXPECT_THROW(refined_rule(p, p.fun_defs[0]), NotContinuous);
}

TEST(Induction, JsonRoundTrip) {
  for (const char* name : {"trace.mfx", "traverse.mfx", "occurs.mfx"}) {
    Program p = testing::load_corpus(name);
    for (const InductionRule& r : {raw_rule(p, p.fun_defs.back()), refined_rule(p, p.fun_defs.back())}) {
      std::string text = render_json(r);
      InductionRule back = parse_rule_json(text);
      EXPECT_TRUE(same_structure(back, r)) << name;
      EXPECT_EQ(render_json(back), text) << name;
      EXPECT_EQ(render_text(back), render_text(r)) << name;
    }
  }
}

TEST(Induction, JsonLayout) {
  std::string text = render_json(refined("trace.mfx"));
  EXPECT_EQ(text.rfind("{\n  \"function\": \"trace\",\n  \"monad\": \"option\",\n  \"kind\": \"refined\",", 0), 0u)
      << text.substr(0, 120);
}

TEST(Induction, MalformedJsonIsRejected) {
  EXPECT_THROW(parse_rule_json("{"), std::runtime_error);
  EXPECT_THROW(parse_rule_json("{\"function\": 3}"), std::runtime_error);
  std::string text = render_json(refined("trace.mfx"));
  std::string broken = text;
  broken.replace(broken.find("\"var\""), 5, "\"what\"");
  EXPECT_THROW(parse_rule_json(broken), std::runtime_error);
}

}  // namespace
}  // namespace mfx
