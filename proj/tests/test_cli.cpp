#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "riskstage/riskstage.hpp"

using namespace riskstage;

namespace {

const std::string kDir = ::testing::TempDir();

std::string path(const std::string& name) { return kDir + "riskstage_cli_" + name; }

int run(const std::string& args, const std::string& out = "/dev/null") {
  const std::string cmd = std::string(RISKSTAGE_CLI) + " " + args + " > " + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SolveReport read_report(const std::string& file) { return report_from_json(nlohmann::json::parse(slurp(file))); }

void dump(const std::string& file, const std::string& text) { std::ofstream(file) << text; }

std::string random_instance(const std::string& name, const std::string& family, int seed) {
  const auto file = path(name);
  EXPECT_EQ(run("gen random --family " + family + " --size 5 --scenarios 3 --seed " + std::to_string(seed), file), 0);
  return file;
}

}  // namespace

TEST(Cli, SolveMatchesLibrary) {
  const auto file = random_instance("sel.json", "selection", 4);
  const auto out = path("sel_report.json");
  ASSERT_EQ(run("solve -i " + file + " -a brute --objective cvar --alpha 0.3", out), 0);
  const auto report = read_report(out);
  const auto inst = parse_instance(slurp(file));
  EXPECT_NEAR(report.value, brute_force_optimum(inst, Objective::conditional(0.3)).value, 1e-9);
  EXPECT_EQ(run("solve -i " + file + " -a selection-dp", out), 0);
  EXPECT_NEAR(read_report(out).value, brute_force_optimum(inst, Objective::expected()).value, 1e-9);
}

TEST(Cli, RandomizedRunsNeedSeedAndRepeat) {
  const auto file = random_instance("rr.json", "selection", 8);
  EXPECT_EQ(run("solve -i " + file + " -a selection-rr"), 1);
  const auto a = path("rr_a.json"), b = path("rr_b.json");
  ASSERT_EQ(run("solve -i " + file + " -a selection-rr --seed 11", a), 0);
  ASSERT_EQ(run("solve -i " + file + " -a selection-rr --seed 11", b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, ExitCodes) {
  const auto file = random_instance("codes.json", "selection", 2);
  EXPECT_EQ(run("solve -i " + file + " -a sp-dp"), 1);       // wrong family
  EXPECT_EQ(run("solve -i " + file + " -a nonsense"), 1);    // unknown algorithm
  EXPECT_EQ(run("solve -i " + file + " -a brute --objective cvar --alpha 1.5"), 1);
  dump(path("bad.json"), "{");
  EXPECT_EQ(run("solve -i " + path("bad.json") + " -a brute"), 1);
  EXPECT_EQ(run("evaluate -i " + file + " -x 99"), 1);

  // A catalog far beyond the guard is an algorithm failure, not bad input.
  TwoStageInstance big;
  big.family = Family::selection;
  big.n = 40;
  big.first_stage.assign(40, 1);
  big.scenario_costs = {std::vector<double>(40, 1)};
  big.probabilities = {1};
  big.structure = SelectionCardinality{20};
  dump(path("big.json"), serialize_instance(big));
  EXPECT_EQ(run("solve -i " + path("big.json") + " -a brute"), 2);
}

TEST(Cli, EvaluateFixedFirstStage) {
  const auto file = random_instance("eval.json", "rs", 6);
  const auto out = path("eval_report.json");
  ASSERT_EQ(run("evaluate -i " + file + " -x 0,2 --objective robust", out), 0);
  const auto inst = parse_instance(slurp(file));
  Choice x(inst.n, 0);
  x[0] = x[2] = 1;
  EXPECT_NEAR(read_report(out).value, evaluate_first_stage(inst, x, Objective::robust()), 1e-9);
}

TEST(Cli, TransformKeepsFirstStageValues) {
  const auto file = random_instance("tr.json", "selection", 5);
  const auto aug = path("tr_aug.json");
  ASSERT_EQ(run("transform e-to-cvar -i " + file + " --alpha 0.4", aug), 0);
  const auto inst = parse_instance(slurp(file));
  const auto transformed = parse_instance(slurp(aug));
  EXPECT_EQ(transformed.scenario_count(), inst.scenario_count() + 1);
  EXPECT_NEAR(brute_force_optimum(inst, Objective::expected()).value,
              brute_force_optimum(transformed, Objective::conditional(0.4)).value, 1e-9);
}

TEST(Cli, SetCoverGeneratorUsesOneBasedElements) {
  dump(path("sets.json"), "[[2,4,3],[1],[3,7],[1,4,6,7],[2,5,6],[1,6]]");
  const auto out = path("cover7.json");
  ASSERT_EQ(run("gen rs-setcover --universe 7 --sets " + path("sets.json"), out), 0);
  const auto inst = parse_instance(slurp(out));
  EXPECT_EQ(inst, gen_rs_setcover({7, {{1, 3, 2}, {0}, {2, 6}, {0, 3, 5, 6}, {1, 4, 5}, {0, 5}}}));
  ASSERT_EQ(run("solve -i " + out + " -a brute --objective robust", path("cover7_report.json")), 0);
  EXPECT_NEAR(read_report(path("cover7_report.json")).value, 59.0, 1e-9);
}

TEST(Cli, ReduceToAssignment) {
  const auto file = random_instance("dag.json", "shortest-path", 3);
  const auto out = path("asg.json");
  ASSERT_EQ(run("reduce sp-to-assignment -i " + file, out), 0);
  EXPECT_EQ(parse_instance(slurp(out)), sp_to_assignment(parse_instance(slurp(file))));
}

TEST(Cli, BenchIsDeterministic) {
  const auto a = path("bench_a.json"), b = path("bench_b.json");
  const std::string args = "bench --family rs -a rs-lp2-robust --trials 5 --seed 3 --size 5 --objective robust --format json";
  ASSERT_EQ(run(args, a), 0);
  ASSERT_EQ(run(args, b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto doc = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(doc.at("trials").size(), 5u);
  EXPECT_EQ(doc.at("summary").at("violations").get<int>(), 0);
}
