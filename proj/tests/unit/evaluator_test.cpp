#include <gtest/gtest.h>

#include <cstdlib>

#include "mfx/evaluator.hpp"
#include "mfx/literals.hpp"
#include "support.hpp"

namespace mfx {
namespace {

using testing::load_corpus;

Heap corpus_heap(const Program& p, const std::string& name) {
  return parse_heap(testing::read_file(testing::corpus_path(name)), p);
}

Outcome at_fuel(const Program& p, const std::string& fun, std::uint64_t fuel,
                const std::vector<Value>& args, const Heap& h = {}) {
  return eval(Approximant{&p, fun, fuel}, args, h);
}

TEST(Evaluator, TraceMatchesOracle) {
  Program p = load_corpus("trace.mfx");
  for (std::uint64_t n = 0; n <= 200; ++n) {
    LfpResult r = run_lfp(p, "trace", {{Value::nat(n)}}, {});
    ASSERT_TRUE(std::holds_alternative<Outcome>(r));
    EXPECT_EQ(std::get<Outcome>(r), Outcome::ok_pure(Value::list(testing::trace_oracle(n))))
        << "n = " << n;
  }
}

TEST(Evaluator, TraceApproximantsOfSix) {
  Program p = load_corpus("trace.mfx");
  std::vector<Value> six{Value::nat(6)};
  for (std::uint64_t fuel = 0; fuel < 4; ++fuel) {
    EXPECT_TRUE(at_fuel(p, "trace", fuel, six).is_bottom()) << fuel;
  }
  for (std::uint64_t fuel = 4; fuel < 10; ++fuel) {
    EXPECT_EQ(at_fuel(p, "trace", fuel, six), Outcome::ok_pure(Value::list({Value::nat(6)})));
  }
  EXPECT_EQ(at_fuel(p, "trace", 1, {Value::nat(0)}), Outcome::ok_pure(Value::list({})));
  EXPECT_TRUE(at_fuel(p, "trace", 0, {Value::nat(0)}).is_bottom());
}

TEST(Evaluator, ApproxChainIsTheIterateSequence) {
  Program p = load_corpus("trace.mfx");
  Chain c = approx_chain(p, "trace", {{Value::nat(6)}}, {}, 6);
  ASSERT_EQ(c.elems.size(), 7u);
  for (std::uint64_t i = 0; i <= 6; ++i) {
    EXPECT_EQ(c.elems[i], at_fuel(p, "trace", i, {Value::nat(6)}));
  }
}

TEST(Evaluator, TraverseAcyclic) {
  Program p = load_corpus("traverse.mfx");
  Heap h = corpus_heap(p, "acyclic.heap");
  Value first = Value::ctor("Node", {Value::nat(1), Value::ref(0)});
  Outcome expected = Outcome::ok(Value::list({Value::nat(1), Value::nat(2)}), h);
  EXPECT_TRUE(at_fuel(p, "traverse", 2, {first}, h).is_bottom());
  EXPECT_EQ(at_fuel(p, "traverse", 3, {first}, h), expected);
  EXPECT_EQ(std::get<Outcome>(run_lfp(p, "traverse", {{first}}, h)), expected);
  EXPECT_TRUE(in_semantics(p, "traverse", {{first}}, h, h,
                           Value::list({Value::nat(1), Value::nat(2)})));
  EXPECT_FALSE(in_semantics(p, "traverse", {{first}}, h, h, Value::list({Value::nat(1)})));
}

TEST(Evaluator, TraverseCyclicDiverges) {
  Program p = load_corpus("traverse.mfx");
  Heap h = corpus_heap(p, "cyclic.heap");
  Value first = Value::ctor("Node", {Value::nat(1), Value::ref(0)});
  EXPECT_EQ(std::get<Diverged>(run_lfp(p, "traverse", {{first}}, h)), Diverged{1000});
  Chain c = approx_chain(p, "traverse", {{first}}, h, 20);
  for (const auto& o : c.elems) EXPECT_TRUE(o.is_bottom());
  for (const auto& y : {Value::list({}), Value::list({Value::nat(1)})}) {
    EXPECT_FALSE(in_semantics(p, "traverse", {{first}}, h, h, y, 50));
  }
}

TEST(Evaluator, OccursOnSharedTerm) {
  Program p = load_corpus("occurs.mfx");
  Heap h = corpus_heap(p, "shared.heap");
  auto run = [&](RefId r1, RefId r2) {
    return std::get<Outcome>(run_lfp(p, "occurs", {{Value::ref(r1), Value::ref(r2)}}, h));
  };
  EXPECT_EQ(run(0, 2), Outcome::ok(Value::boolean(true), h));
  EXPECT_EQ(run(0, 3), Outcome::ok(Value::boolean(false), h));
  EXPECT_EQ(run(0, 1), Outcome::ok(Value::boolean(true), h));
  EXPECT_EQ(run(1, 0), Outcome::ok(Value::boolean(false), h));
}

TEST(Evaluator, OccursOnCyclicTermDiverges) {
  Program p = load_corpus("occurs.mfx");
  Heap h = corpus_heap(p, "cyclic_term.heap");
  LfpResult r = run_lfp(p, "occurs", {{Value::ref(0), Value::ref(1)}}, h);
  EXPECT_EQ(render(r), "Diverged(1000)");
}

TEST(Evaluator, OptionModeIgnoresTheHeap) {
  Program p = load_corpus("trace.mfx");
  Heap h;
  h.store[0] = Value::nat(7);
  h.next = 1;
  EXPECT_EQ(at_fuel(p, "trace", 10, {Value::nat(12)}, h),
            at_fuel(p, "trace", 10, {Value::nat(12)}, {}));
}

TEST(Evaluator, HeapWritesAndAllocation) {
  Program p = parse_program(
      "heap fun bump(r : nat ref) : nat = do n ← !r; r := n + 1; return n done\n"
      "heap fun fresh(n : nat) : nat ref = ref n\n"
      "heap fun both(n : nat) : nat = do r ← fresh(n); _ ← bump(r); !r done");
  Heap h;
  h.store[0] = Value::nat(4);
  h.next = 1;
  Heap h5 = heap_set(h, 0, Value::nat(5));
  EXPECT_EQ(std::get<Outcome>(run_lfp(p, "bump", {{Value::ref(0)}}, h)),
            Outcome::ok(Value::nat(4), h5));
  auto [r, h2] = heap_alloc(h, Value::nat(9));
  EXPECT_EQ(std::get<Outcome>(run_lfp(p, "fresh", {{Value::nat(9)}}, h)), Outcome::ok(r, h2));
  Outcome both = std::get<Outcome>(run_lfp(p, "both", {{Value::nat(2)}}, Heap{}));
  EXPECT_EQ(both.value, Value::nat(3));
  EXPECT_EQ(both.heap.next, 1u);
}

TEST(Evaluator, ExternalCallsResolveAtTheirOwnFixedPoint) {
  Program p = parse_program(
      "option fun down(n : nat) : nat = if n = 0 then return 0 else down(n - 1)\n"
      "option fun f(n : nat) : nat = do x ← down(n); return (x + 1) done");
  EXPECT_TRUE(at_fuel(p, "f", 0, {Value::nat(50)}).is_bottom());
  EXPECT_EQ(at_fuel(p, "f", 1, {Value::nat(50)}), Outcome::ok_pure(Value::nat(1)));
  EXPECT_EQ(render(run_lfp(p, "f", {{Value::nat(5000)}}, {}, 100)), "Diverged(100)");
}

TEST(Evaluator, MonadLawsObservationally) {
  Program p = parse_program(
      "option fun a(n : nat) : nat = do x ← return n; return (x + x) done\n"
      "option fun b(n : nat) : nat = return (n + n)\n"
      "heap fun c(r : nat ref) : nat = do y ← do x ← !r; r := x + 1; return x done; "
      "z ← !r; return (y + z) done\n"
      "heap fun d(r : nat ref) : nat = do x ← !r; y ← do _ ← r := x + 1; return x done; "
      "z ← !r; return (y + z) done");
  Heap h;
  h.store[0] = Value::nat(3);
  h.next = 1;
  for (std::uint64_t n = 0; n < 20; ++n) {
    EXPECT_EQ(at_fuel(p, "a", 1, {Value::nat(n)}), at_fuel(p, "b", 1, {Value::nat(n)}));
  }
  EXPECT_EQ(at_fuel(p, "c", 1, {Value::ref(0)}, h), at_fuel(p, "d", 1, {Value::ref(0)}, h));
  EXPECT_EQ(at_fuel(p, "c", 1, {Value::ref(0)}, h).value, Value::nat(7));
}

TEST(Evaluator, UnfoldOnceAnswersSelfCallsWithTheHandler) {
  Program p = load_corpus("trace.mfx");
  const FunDef& f = *p.find_fun("trace");
  std::vector<Value> args{Value::nat(6)};
  Outcome canned = unfold_once(p, f, args, {}, [](const std::vector<Value>& a, const Heap&) {
    EXPECT_EQ(a[0], Value::nat(3));
    return Outcome::ok_pure(Value::list({Value::nat(99)}));
  });
  EXPECT_EQ(canned, Outcome::ok_pure(Value::list({Value::nat(6), Value::nat(99)})));
  Outcome bottom = unfold_once(p, f, args, {},
                               [](const std::vector<Value>&, const Heap&) { return Outcome::bottom(); });
  EXPECT_TRUE(bottom.is_bottom());
}

TEST(Evaluator, CallValidation) {
  Program p = load_corpus("traverse.mfx");
  const FunDef& f = *p.find_fun("traverse");
  EXPECT_THROW(check_call(p, f, {}, {}), EvalError);
  std::vector<Value> wrong{Value::nat(1)};
  EXPECT_THROW(check_call(p, f, wrong, {}), EvalError);
  std::vector<Value> dangling{Value::ctor("Node", {Value::nat(1), Value::ref(3)})};
  EXPECT_THROW(check_call(p, f, dangling, {}), EvalError);
  std::vector<Value> ok{Value::ctor("Empty")};
  EXPECT_NO_THROW(check_call(p, f, ok, {}));
}

TEST(Evaluator, FuelCapFromEnvironment) {
  ::setenv("MFX_FUEL", "77", 1);
  EXPECT_EQ(default_fuel_cap(), 77u);
  ::setenv("MFX_FUEL", "junk", 1);
  EXPECT_EQ(default_fuel_cap(), kDefaultFuelCap);
  ::unsetenv("MFX_FUEL");
  EXPECT_EQ(default_fuel_cap(), kDefaultFuelCap);
}

}  // namespace
}  // namespace mfx
