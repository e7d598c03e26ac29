#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "mfx/audit.hpp"
#include "mfx/continuity.hpp"
#include "mfx/evaluator.hpp"
#include "mfx/induction.hpp"
#include "mfx/literals.hpp"
#include "paper_rules.hpp"
#include "support.hpp"

namespace mfx {
namespace {

using testing::Rng;

struct Result {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_seconds;
  std::function<Result()> run;
};

const char* kCorpus[] = {"trace.mfx", "traverse.mfx", "occurs.mfx"};

Heap corpus_heap(const Program& p, const std::string& name) {
  return parse_heap(testing::read_file(testing::corpus_path(name)), p);
}

Result ac1_golden_rules() {
  struct Expect {
    const char* file;
    InductionRule paper;
  };
  Expect expects[] = {{"trace.mfx", testing::paper_trace_rule()},
                      {"traverse.mfx", testing::paper_traverse_rule()},
                      {"occurs.mfx", testing::paper_occurs_rule()}};
  Result r;
  std::ostringstream d;
  for (const auto& e : expects) {
    Program p = testing::load_corpus(e.file);
    InductionRule got = refined_rule(p, p.fun_defs.back());
    std::string why;
    if (!rules_alpha_equivalent(got, e.paper, &why)) {
      r.pass = false;
      d << got.function << ": " << why << "; ";
    } else {
      d << got.function << " " << got.obligations.size() << " obligations; ";
    }
  }
  r.detail = d.str();
  if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
  return r;
}

Result ac2_continuity_walkthrough() {
  Program p = testing::load_corpus("trace.mfx");
  ContinuityResult c = check_continuous(p.fun_defs[0]);
  if (!std::holds_alternative<Derivation>(c)) return {false, "trace is not continuous"};
  std::vector<Rule> rules = preorder(std::get<Derivation>(c));
  std::vector<Rule> expected{Rule::Lam, Rule::If, Rule::Const, Rule::Bind, Rule::Rec, Rule::Const};
  std::string names;
  for (Rule rule : rules) names += std::string(names.empty() ? "" : ", ") + std::string(to_string(rule));
  return {rules == expected, names};
}

struct Sampled {
  Program program;
  std::string fun;
  std::vector<testing::Sample> samples;
};

std::vector<Sampled> chain_samples() {
  Rng rng(testing::kSeed);
  std::vector<Sampled> out;
  for (const char* file : kCorpus) {
    Program p = testing::load_corpus(file);
    const FunDef& f = p.fun_defs.back();
    auto samples = testing::random_samples(p, f, rng, 200);
    out.push_back({p, f.name, std::move(samples)});
  }
  return out;
}

Result ac3_chain_property() {
  std::size_t checked = 0, violations = 0;
  for (const auto& s : chain_samples()) {
    for (const auto& sample : s.samples) {
      std::vector<Outcome> chain;
      for (std::uint64_t fuel = 0; fuel <= 32; ++fuel) {
        chain.push_back(eval(Approximant{&s.program, s.fun, fuel}, sample.args, sample.heap));
      }
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        ++checked;
        if (!outcome_le(chain[i], chain[i + 1])) ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " consecutive pairs, " +
                               std::to_string(violations) + " violations"};
}

Result ac4_fixed_point_equation() {
  std::size_t stabilized = 0, violations = 0;
  for (const auto& s : chain_samples()) {
    const FunDef& f = *s.program.find_fun(s.fun);
    for (const auto& sample : s.samples) {
      Outcome lub = eval(Approximant{&s.program, s.fun, 32}, sample.args, sample.heap);
      if (lub.is_bottom()) continue;
      ++stabilized;
      auto fixp = [&](const std::vector<Value>& args, const Heap& h) {
        return eval(Approximant{&s.program, s.fun, 32}, args, h);
      };
      if (!(unfold_once(s.program, f, sample.args, sample.heap, fixp) == lub)) ++violations;
    }
  }
  return {violations == 0 && stabilized > 0,
          std::to_string(stabilized) + " stabilized inputs, " + std::to_string(violations) +
              " violations"};
}

// Every heap with `cells` cells of `nat rtrm` over label 0, with cell r1
// fixed to Var 0 None.
void for_each_occurs_heap(std::size_t cells, RefId r1, const std::function<void(const Heap&)>& visit) {
  std::vector<Value> options;
  options.push_back(Value::ctor("Var", {Value::nat(0), Value::none()}));
  options.push_back(Value::ctor("Const", {Value::nat(0)}));
  for (RefId a = 0; a < cells; ++a) {
    options.push_back(Value::ctor("Var", {Value::nat(0), Value::some(Value::ref(a))}));
    for (RefId b = 0; b < cells; ++b) {
      options.push_back(Value::ctor("App", {Value::ref(a), Value::ref(b)}));
    }
  }
  std::vector<std::size_t> digits(cells, 0);
  Heap h;
  h.next = cells;
  while (true) {
    for (RefId i = 0; i < cells; ++i) h.store[i] = i == r1 ? options[0] : options[digits[i]];
    visit(h);
    std::size_t i = 0;
    for (; i < cells; ++i) {
      if (i == r1) continue;
      if (++digits[i] < options.size()) break;
      digits[i] = 0;
    }
    if (i == cells) return;
  }
}

Result ac5_partiality() {
  std::ostringstream d;
  bool pass = true;

  Program traverse = testing::load_corpus("traverse.mfx");
  Value first = Value::ctor("Node", {Value::nat(1), Value::ref(0)});
  LfpResult cyc = run_lfp(traverse, "traverse", {{first}}, corpus_heap(traverse, "cyclic.heap"), 1000);
  Program occurs = testing::load_corpus("occurs.mfx");
  LfpResult cyc_term = run_lfp(occurs, "occurs", {{Value::ref(0), Value::ref(1)}},
                               corpus_heap(occurs, "cyclic_term.heap"), 1000);
  if (render(cyc) != "Diverged(1000)" || render(cyc_term) != "Diverged(1000)") {
    pass = false;
    d << "cyclic inputs: " << render(cyc) << ", " << render(cyc_term) << "; ";
  }

  Rng rng(testing::kSeed + 5);
  std::size_t lists = 0, list_failures = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
    std::vector<RefId> cells(len + 1);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    Heap h;
    h.next = len + 1;
    h.store[cells[len]] = Value::ctor("Empty");
    for (std::size_t i = len; i-- > 0;) {
      h.store[cells[i]] =
          Value::ctor("Node", {Value::nat(rng() % 100), Value::ref(cells[i + 1])});
    }
    Value start = h.store.at(cells[0]);
    auto expected = testing::walk_list(h, start);
    LfpResult got = run_lfp(traverse, "traverse", {{start}}, h, 1000);
    ++lists;
    if (!expected || !std::holds_alternative<Outcome>(got) ||
        !(std::get<Outcome>(got) == Outcome::ok(Value::list(*expected), h))) {
      ++list_failures;
    }
  }
  d << lists << " acyclic lists, " << list_failures << " mismatches; ";
  pass = pass && list_failures == 0;

  std::size_t runs = 0, terminating = 0, occurs_failures = 0;
  for (std::size_t cells = 1; cells <= 4; ++cells) {
    for (RefId r1 = 0; r1 < cells; ++r1) {
      for_each_occurs_heap(cells, r1, [&](const Heap& h) {
        for (RefId r2 = 0; r2 < cells; ++r2) {
          ++runs;
          bool expected = testing::reaches(h, r1, r2);
          bool must_terminate = !testing::has_cycle_from(h, r2);
          LfpResult got = run_lfp(occurs, "occurs", {{Value::ref(r1), Value::ref(r2)}}, h, 64);
          if (const auto* o = std::get_if<Outcome>(&got)) {
            ++terminating;
            if (!(*o == Outcome::ok(Value::boolean(expected), h))) ++occurs_failures;
          } else if (must_terminate) {
            ++occurs_failures;
          }
        }
      });
    }
  }
  d << runs << " occurs runs on heaps of <= 4 cells (" << terminating << " terminating), "
    << occurs_failures << " disagreements";
  pass = pass && occurs_failures == 0;
  return {pass, d.str()};
}

Result ac6_audit() {
  std::ostringstream d;
  bool pass = true;
  auto audit = [&](const char* file, const char* qfile, std::uint64_t nats, std::uint64_t cells) {
    Program p = testing::load_corpus(file);
    QSpec q = parse_qspec(testing::read_file(testing::corpus_path(qfile)), p);
    DomainBounds b;
    b.nat_count = nats;
    b.max_cells = cells;
    return check_rule_sampled(p, refined_rule(p, p.fun_defs.back()), q, b);
  };
  struct Good {
    const char* file;
    const char* q;
    std::uint64_t nats, cells;
  };
  for (const Good& g : {Good{"trace.mfx", "trace.q", 33, 0}, Good{"traverse.mfx", "traverse.q", 3, 3},
                        Good{"occurs.mfx", "occurs.q", 1, 3}}) {
    Verdict v = audit(g.file, g.q, g.nats, g.cells);
    bool ok = v.obligations_hold && v.conclusion_holds && v.terminating > 0;
    pass = pass && ok;
    d << g.file << " " << (ok ? "holds" : "FAILS") << " (" << v.assignments_checked
      << " assignments, " << v.terminating << "/" << v.inputs << " terminating); ";
  }
  Verdict wrong = audit("trace.mfx", "trace_wrong.q", 33, 0);
  bool witness = !wrong.obligations_hold && !wrong.obligation_witness.empty();
  pass = pass && witness;
  d << "wrong trace Q: ";
  if (witness) {
    d << "ObligationFails(" << wrong.failed_obligation << ")";
    for (const auto& [k, v] : wrong.obligation_witness) d << " " << k << " = " << v;
  } else {
    d << "no failure found";
  }
  return {pass, d.str()};
}

Result ac7_laws() {
  Rng rng(testing::kSeed + 7);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    Outcome a = testing::random_outcome(rng);
    Outcome b = testing::random_outcome(rng);
    Outcome c = testing::random_outcome(rng);
    bool ok = outcome_le(a, a) && outcome_le(Outcome::bottom(), a) &&
              (!(outcome_le(a, b) && outcome_le(b, a)) || a == b) &&
              (!(outcome_le(a, b) && outcome_le(b, c)) || outcome_le(a, c));
    if (!ok) ++failures;
  }
  std::size_t order_failures = failures;

  failures = 0;
  std::uniform_int_distribution<int> small(0, 9);
  for (int i = 0; i < 1000; ++i) {
    Heap h;
    int cells = small(rng) % 4;
    for (int c = 0; c < cells; ++c) h = heap_alloc(h, Value::nat(small(rng))).second;
    Value v = Value::nat(small(rng));
    Value w = Value::nat(small(rng));
    auto [ref, h1] = heap_alloc(h, v);
    RefId r = ref.as<Value::RefV>()->id;
    bool ok = heap_get(h1, r) == v && h1.next == h.next + 1 &&
              heap_get(heap_set(h1, r, w), r) == w &&
              heap_set(heap_set(h1, r, w), r, v) == heap_set(h1, r, v) &&
              heap_set(h1, r, heap_get(h1, r)) == h1;
    for (const auto& [k, old] : h.store) {
      ok = ok && heap_get(h1, k) == old && heap_get(heap_set(h1, r, w), k) == old;
    }
    if (!ok) ++failures;
  }
  std::size_t heap_failures = failures;

  const std::vector<std::string> values{"n", "n + 1", "n + n", "n div 2", "7"};
  const std::vector<std::string> computations{
      "return {}", "g({})", "do m ← !r; return (m + {}) done", "do _ ← r := {}; !r done",
      "do s ← ref {}; !s done"};
  auto fill = [](const std::string& tmpl, const std::string& arg) {
    std::string out = tmpl;
    for (std::size_t pos; (pos = out.find("{}")) != std::string::npos;) {
      out.replace(pos, 2, "(" + arg + ")");
    }
    return out;
  };
  auto pick = [&](const std::vector<std::string>& xs) { return xs[rng() % xs.size()]; };
  const std::string prelude =
      "heap fun g(k : nat) : nat = if k = 0 then return 0 else do z ← g(k - 1); return (z + 2) done\n";
  failures = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string e = pick(values);
    std::string k = pick(computations);
    std::string f = pick(computations);
    std::string m = fill(pick(computations), pick(values));
    std::string lhs, rhs;
    switch (i % 3) {
      case 0:
        lhs = "do x ← return (" + e + "); " + fill(k, "x") + " done";
        rhs = fill(k, e);
        break;
      case 1:
        lhs = "do x ← " + m + "; return x done";
        rhs = m;
        break;
      default:
        lhs = "do y ← do x ← " + m + "; " + fill(f, "x") + " done; " + fill(k, "y") + " done";
        rhs = "do x ← " + m + "; do y ← " + fill(f, "x") + "; " + fill(k, "y") + " done done";
        break;
    }
    std::string src = prelude + "heap fun lhs(n : nat, r : nat ref) : nat = " + lhs + "\n" +
                      "heap fun rhs(n : nat, r : nat ref) : nat = " + rhs + "\n";
    Program p = parse_program(src);
    Heap h;
    h.store[0] = Value::nat(small(rng));
    h.next = 1;
    std::vector<Value> args{Value::nat(small(rng)), Value::ref(0)};
    if (!(eval(Approximant{&p, "lhs", 1}, args, h) == eval(Approximant{&p, "rhs", 1}, args, h))) {
      ++failures;
    }
  }
  std::size_t monad_failures = failures;
  return {order_failures + heap_failures + monad_failures == 0,
          "order " + std::to_string(order_failures) + ", heap " + std::to_string(heap_failures) +
              ", monad " + std::to_string(monad_failures) + " failures in 1000 cases each"};
}

Result ac8_round_trips() {
  std::size_t programs = 0, rules = 0;
  bool pass = true;
  for (const char* file : kCorpus) {
    Program p = testing::load_corpus(file);
    Program back = parse_program(pretty(p));
    ++programs;
    pass = pass && alpha_equal(p, back) && pretty(back) == pretty(p);
    const FunDef& f = p.fun_defs.back();
    for (const InductionRule& r : {raw_rule(p, f), refined_rule(p, f)}) {
      ++rules;
      InductionRule parsed = parse_rule_json(render_json(r));
      pass = pass && same_structure(parsed, r) && render_json(parsed) == render_json(r);
    }
  }
  return {pass, std::to_string(programs) + " programs, " + std::to_string(rules) + " rules"};
}

}  // namespace
}  // namespace mfx

int main() {
  using namespace mfx;
  std::vector<Criterion> criteria{
      {"AC1", "golden induction rules", 1, ac1_golden_rules},
      {"AC2", "continuity walkthrough", 1, ac2_continuity_walkthrough},
      {"AC3", "chain property", 30, ac3_chain_property},
      {"AC4", "fixed-point equation", 30, ac4_fixed_point_equation},
      {"AC5", "partiality behavior", 60, ac5_partiality},
      {"AC6", "rule soundness audit", 120, ac6_audit},
      {"AC7", "order, store and monad laws", 60, ac7_laws},
      {"AC8", "round-trips", 10, ac8_round_trips},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      r.pass = false;
      r.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << c.id << " " << (r.pass ? "PASS" : "FAIL") << " " << c.title << ": " << r.detail
              << " [" << timing << "]\n";
    std::cout.flush();
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
