#include "mfx/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mfx/audit.hpp"
#include "mfx/continuity.hpp"
#include "mfx/evaluator.hpp"
#include "mfx/induction.hpp"
#include "mfx/literals.hpp"

namespace mfx::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const FunDef& select_fun(const Program& program, const std::string& name) {
  if (name.empty()) {
    if (program.fun_defs.empty()) throw UsageError("no function definitions in file");
    return program.fun_defs.back();
  }
  const FunDef* f = program.find_fun(name);
  if (!f) throw UsageError("no function named " + name);
  return *f;
}

nlohmann::ordered_json derivation_json(const Derivation& d, const std::string& self) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(to_string(d.rule));
  j["subject"] = pretty(*d.subject, self);
  j["children"] = nlohmann::ordered_json::array();
  for (const auto& c : d.children) j["children"].push_back(derivation_json(c, self));
  return j;
}

struct Options {
  std::string file;
  std::string fun;
  std::string args;
  std::string heap;
  std::string q;
  std::uint64_t fuel = 0;
  std::uint64_t max_fuel = 0;
  bool explain = false;
  bool json = false;
  bool raw = false;
  DomainBounds bounds;
};

int do_check(const Options& o, std::ostream& out, std::ostream& err) {
  ParseOptions po;
  po.reject_pure_self_calls = false;
  Program program = parse_program(slurp(o.file), po);
  std::vector<const FunDef*> funs;
  if (o.fun.empty()) {
    for (const auto& f : program.fun_defs) funs.push_back(&f);
  } else {
    funs.push_back(&select_fun(program, o.fun));
  }
  int status = kOk;
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  for (const FunDef* f : funs) {
    ContinuityResult r = check_continuous(*f);
    nlohmann::ordered_json entry;
    entry["function"] = f->name;
    if (const auto* d = std::get_if<Derivation>(&r)) {
      entry["continuous"] = true;
      std::vector<std::string> rules;
      for (Rule rule : preorder(*d)) rules.emplace_back(to_string(rule));
      entry["rules"] = rules;
      entry["derivation"] = derivation_json(*d, f->name);
      if (!o.json) {
        out << f->name << ": continuous " << shape(*d) << "\n";
        if (o.explain) out << explain(*d, f->name);
      }
    } else {
      const auto& failure = std::get<ContinuityFailure>(r);
      status = kStaticError;
      entry["continuous"] = false;
      entry["path"] = failure.path_string();
      entry["reason"] = failure.reason;
      if (!o.json) {
        err << f->name << ": not continuous at " << failure.path_string() << ": "
            << failure.reason << "\n";
      }
    }
    report.push_back(entry);
  }
  if (o.json) out << report.dump(2) << "\n";
  return status;
}

struct Input {
  Program program;
  std::vector<Value> args;
  Heap heap;
};

Input load_input(const Options& o) {
  Input in{parse_program(slurp(o.file)), {}, {}};
  in.args = parse_values(o.args, in.program);
  if (!o.heap.empty()) in.heap = parse_heap(slurp(o.heap), in.program);
  return in;
}

int do_eval(const Options& o, std::ostream& out) {
  Input in = load_input(o);
  const FunDef& f = select_fun(in.program, o.fun);
  check_call(in.program, f, in.args, in.heap);
  std::uint64_t cap = o.fuel ? o.fuel : default_fuel_cap();
  LfpResult r = run_lfp(in.program, f.name, in.args, in.heap, cap);
  out << render(r) << "\n";
  return std::holds_alternative<Diverged>(r) ? kDiverged : kOk;
}

int do_approx(const Options& o, std::ostream& out) {
  Input in = load_input(o);
  const FunDef& f = select_fun(in.program, o.fun);
  check_call(in.program, f, in.args, in.heap);
  Chain c = approx_chain(in.program, f.name, in.args, in.heap, o.max_fuel);
  for (const auto& e : c.elems) out << render(e) << "\n";
  return kOk;
}

int do_induct(const Options& o, std::ostream& out) {
  Program program = parse_program(slurp(o.file));
  const FunDef& f = select_fun(program, o.fun);
  InductionRule rule = o.raw ? raw_rule(program, f) : refined_rule(program, f);
  out << (o.json ? render_json(rule) : render_text(rule));
  return kOk;
}

int do_audit(const Options& o, std::ostream& out) {
  Program program = parse_program(slurp(o.file));
  const FunDef& f = select_fun(program, o.fun);
  QSpec q = parse_qspec(slurp(o.q), program);
  DomainBounds bounds = o.bounds;
  if (o.fuel) bounds.fuel = o.fuel;
  Verdict v = check_rule_sampled(program, refined_rule(program, f), q, bounds);
  out << (o.json ? render_json(v) : render_text(v));
  return v.obligations_hold && v.conclusion_holds ? kOk : kAuditFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recursive monadic functions: continuity, evaluation and induction rules", "mfx"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "Program file")->required();
    sub->add_option("--fun", o.fun, "Function name (default: the last one)");
  };

  CLI::App* check = app.add_subcommand("check", "Check continuity of the recursive functions");
  add_file(check);
  check->add_flag("--explain", o.explain, "Print the derivation tree");
  check->add_flag("--json", o.json, "Machine-readable output");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate the least fixed point at given arguments");
  add_file(eval);
  eval->add_option("--args", o.args, "Arguments as pure expressions");
  eval->add_option("--heap", o.heap, "Heap file");
  eval->add_option("--fuel", o.fuel, "Fuel cap (default: MFX_FUEL or 1000)");

  CLI::App* approx = app.add_subcommand("approx", "Print the Kleene approximants F^0 .. F^N");
  add_file(approx);
  approx->add_option("--args", o.args, "Arguments as pure expressions");
  approx->add_option("--heap", o.heap, "Heap file");
  approx->add_option("--max-fuel", o.max_fuel, "Last approximant index")->required();

  CLI::App* induct = app.add_subcommand("induct", "Print the partial-correctness induction rule");
  add_file(induct);
  induct->add_flag("--raw", o.raw, "Unrefined rule");
  induct->add_flag("--json", o.json, "Machine-readable output");

  CLI::App* audit = app.add_subcommand("audit", "Audit the refined rule against Q on a small domain");
  add_file(audit);
  audit->add_option("--q", o.q, "Predicate file")->required();
  audit->add_option("--nats", o.bounds.nat_count, "Naturals 0 .. N-1");
  audit->add_option("--max-list-len", o.bounds.max_list_len, "Longest enumerated list");
  audit->add_option("--max-cells", o.bounds.max_cells, "Largest enumerated heap");
  audit->add_option("--max-depth", o.bounds.max_depth, "Datatype nesting depth");
  audit->add_option("--fuel", o.fuel, "Fuel cap for running the function");
  audit->add_option("--budget", o.bounds.budget, "Maximum enumeration steps");
  audit->add_flag("--json", o.json, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kStaticError;
  }

  try {
    if (check->parsed()) return do_check(o, out, err);
    if (eval->parsed()) return do_eval(o, out);
    if (approx->parsed()) return do_approx(o, out);
    if (induct->parsed()) return do_induct(o, out);
    return do_audit(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const StaticError& e) {
    err << e.what() << "\n";
  } catch (const NotContinuous& e) {
    err << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    err << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kStaticError;
}

}  // namespace mfx::cli
