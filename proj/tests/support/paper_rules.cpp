#include "paper_rules.hpp"

namespace mfx::testing {

namespace {

using namespace mfx::term;

TermPtr v(const char* name) { return var(name); }

TermPtr q(std::vector<TermPtr> args) { return call("Q", std::move(args)); }

TermPtr get_ref(TermPtr r, TermPtr h) { return call("get_ref", {std::move(r), std::move(h)}); }

TermPtr ne(TermPtr a, TermPtr b) { return binary(BinOp::Ne, std::move(a), std::move(b)); }

Premise heap_read(TermPtr pattern, TermPtr r, TermPtr h) {
  return Premise::eq(Premise::Kind::HeapGet, std::move(pattern), get_ref(std::move(r), std::move(h)));
}

Obligation obligation(std::vector<const char*> names, std::vector<Premise> premises,
                      TermPtr conclusion) {
  Obligation o;
  for (const char* n : names) o.vars.push_back({n, Type::var("'a")});
  o.premises = std::move(premises);
  o.conclusion = std::move(conclusion);
  return o;
}

InductionRule rule(const char* fun, Monad monad, std::vector<Obligation> obligations) {
  InductionRule r;
  r.function = fun;
  r.monad = monad;
  r.obligations = std::move(obligations);
  return r;
}

}  // namespace

InductionRule paper_trace_rule() {
  auto step_n = call("step", {v("n")});
  auto even_n = call("even", {v("n")});
  return rule("trace", Monad::Option,
              {
                  obligation({}, {}, q({nat(0), nil()})),
                  obligation({"n", "tl"},
                             {Premise::cond(ne(v("n"), nat(0))), Premise::hyp(q({step_n, v("tl")})),
                              Premise::cond(even_n)},
                             q({v("n"), cons(v("n"), v("tl"))})),
                  obligation({"n", "tl"},
                             {Premise::cond(ne(v("n"), nat(0))), Premise::hyp(q({step_n, v("tl")})),
                              Premise::cond(negate(even_n))},
                             q({v("n"), v("tl")})),
              });
}

InductionRule paper_traverse_rule() {
  return rule("traverse", Monad::Heap,
              {
                  obligation({"h'"}, {}, q({ctor("Empty"), v("h'"), v("h'"), nil()})),
                  obligation({"h₁", "h₂", "x'", "r", "n"},
                             {Premise::hyp(q({get_ref(v("r"), v("h₁")), v("h₁"), v("h₂"), v("n")}))},
                             q({ctor("Node", {v("x'"), v("r")}), v("h₁"), v("h₂"),
                                cons(v("x'"), v("n"))})),
              });
}

InductionRule paper_occurs_rule() {
  auto r1 = v("r₁");
  auto r2 = v("r₂");
  auto h = v("h");
  auto h1 = v("h'");
  auto h2 = v("h''");
  return rule(
      "occurs", Monad::Heap,
      {
          obligation({"r₁", "h", "n", "σ"},
                     {heap_read(ctor("Var", {v("n"), v("σ")}), r1, h)},
                     q({r1, r1, h, h, boolean(true)})),
          obligation({"r₁", "r₂", "h", "n"},
                     {Premise::cond(ne(r1, r2)), heap_read(ctor("Var", {v("n"), none()}), r2, h)},
                     q({r1, r2, h, h, boolean(false)})),
          obligation({"r₁", "r₂", "h'", "y", "h", "n", "r'"},
                     {Premise::cond(ne(r1, r2)), Premise::hyp(q({r1, v("r'"), h, h1, v("y")})),
                      heap_read(ctor("Var", {v("n"), some(v("r'"))}), r2, h)},
                     q({r1, r2, h, h1, v("y")})),
          obligation({"r₁", "r₂", "h", "n"}, {heap_read(ctor("Const", {v("n")}), r2, h)},
                     q({r1, r2, h, h, boolean(false)})),
          obligation({"r₁", "r₂", "h'", "h", "r₃", "r₄", "b"},
                     {heap_read(ctor("App", {v("r₃"), v("r₄")}), r2, h),
                      Premise::hyp(q({r1, v("r₃"), h, h1, v("b")})), Premise::cond(v("b"))},
                     q({r1, r2, h, h1, boolean(true)})),
          obligation({"r₁", "r₂", "h''", "y", "h", "r₃", "r₄", "h'", "b"},
                     {heap_read(ctor("App", {v("r₃"), v("r₄")}), r2, h),
                      Premise::hyp(q({r1, v("r₃"), h, h1, v("b")})),
                      Premise::cond(negate(v("b"))),
                      Premise::hyp(q({r1, v("r₄"), h1, h2, v("y")}))},
                     q({r1, r2, h, h2, v("y")})),
      });
}

}  // namespace mfx::testing
