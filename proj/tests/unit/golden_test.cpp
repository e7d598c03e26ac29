#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mfx/cli.hpp"
#include "support.hpp"

namespace mfx {
namespace {

struct Case {
  std::string name;
  int status;
  std::vector<std::string> args;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

std::vector<Case> cases() {
  return {
      {"check_trace", 0, {"check", "trace.mfx", "--explain"}},
      {"check_traverse", 0, {"check", "traverse.mfx", "--explain"}},
      {"check_occurs", 0, {"check", "occurs.mfx", "--explain"}},
      {"check_trace_json", 0, {"check", "trace.mfx", "--json"}},
      {"eval_trace", 0, {"eval", "trace.mfx", "--args", "100"}},
      {"eval_traverse_acyclic", 0,
       {"eval", "traverse.mfx", "--args", "Node 1 ref0", "--heap", "acyclic.heap"}},
      {"eval_traverse_cyclic", 2,
       {"eval", "traverse.mfx", "--args", "Node 1 ref0", "--heap", "cyclic.heap"}},
      {"eval_occurs_shared", 0,
       {"eval", "occurs.mfx", "--args", "ref0 ref2", "--heap", "shared.heap"}},
      {"eval_occurs_cyclic", 2,
       {"eval", "occurs.mfx", "--args", "ref0 ref1", "--heap", "cyclic_term.heap"}},
      {"approx_trace", 0, {"approx", "trace.mfx", "--args", "6", "--max-fuel", "6"}},
      {"approx_traverse", 0,
       {"approx", "traverse.mfx", "--args", "Node 1 ref0", "--heap", "acyclic.heap", "--max-fuel",
        "4"}},
      {"approx_occurs", 0,
       {"approx", "occurs.mfx", "--args", "ref0 ref2", "--heap", "shared.heap", "--max-fuel", "4"}},
      {"induct_trace", 0, {"induct", "trace.mfx"}},
      {"induct_traverse", 0, {"induct", "traverse.mfx"}},
      {"induct_occurs", 0, {"induct", "occurs.mfx", "--fun", "occurs"}},
      {"induct_trace_raw", 0, {"induct", "trace.mfx", "--raw"}},
      {"induct_traverse_raw", 0, {"induct", "traverse.mfx", "--raw"}},
      {"induct_occurs_raw", 0, {"induct", "occurs.mfx", "--raw"}},
      {"induct_trace_json", 0, {"induct", "trace.mfx", "--json"}},
      {"induct_traverse_json", 0, {"induct", "traverse.mfx", "--json"}},
      {"induct_occurs_json", 0, {"induct", "occurs.mfx", "--json"}},
      {"audit_trace", 0, {"audit", "trace.mfx", "--q", "trace.q", "--nats", "33"}},
      {"audit_trace_wrong", 3, {"audit", "trace.mfx", "--q", "trace_wrong.q", "--nats", "33"}},
      {"audit_trace_wrong_json", 3,
       {"audit", "trace.mfx", "--q", "trace_wrong.q", "--nats", "33", "--json"}},
      {"audit_traverse", 0,
       {"audit", "traverse.mfx", "--q", "traverse.q", "--nats", "2", "--max-cells", "2"}},
      {"audit_occurs", 0,
       {"audit", "occurs.mfx", "--q", "occurs.q", "--nats", "1", "--max-cells", "2"}},
  };
}

class Golden : public ::testing::TestWithParam<Case> {};

TEST_P(Golden, MatchesFile) {
  const Case& c = GetParam();
  std::vector<std::string> args;
  for (const auto& a : c.args) {
    bool is_file = a.find(".mfx") != std::string::npos || a.find(".heap") != std::string::npos ||
                   (a.size() > 2 && a.substr(a.size() - 2) == ".q");
    args.push_back(is_file ? testing::corpus_path(a) : a);
  }
  std::ostringstream out, err;
  int status = cli::run(args, out, err);
  EXPECT_EQ(status, c.status) << err.str();
  std::string path = std::string(MFX_GOLDEN_DIR) + "/" + c.name + ".out";
  if (std::getenv("MFX_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << out.str();
    return;
  }
  EXPECT_EQ(out.str(), testing::read_file(path)) << path;
}

INSTANTIATE_TEST_SUITE_P(Corpus, Golden, ::testing::ValuesIn(cases()),
                         [](const ::testing::TestParamInfo<Case>& info) { return info.param.name; });

}  // namespace
}  // namespace mfx
