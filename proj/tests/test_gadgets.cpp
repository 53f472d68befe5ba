#include <gtest/gtest.h>

#include "oracles.hpp"
#include "riskstage/riskstage.hpp"

using namespace riskstage;

namespace {

SetCoverInput seven_element_cover() {
  // elements u1..u7 as 0..6
  return {7, {{1, 3, 2}, {0}, {2, 6}, {0, 3, 5, 6}, {1, 4, 5}, {0, 5}}};
}

SetCoverInput six_element_cover() { return {6, {{0, 4, 5}, {1, 5}, {2, 3, 4}, {2, 4}}}; }

}  // namespace

TEST(RsSetCover, SevenElementCostMatrix) {
  const auto inst = gen_rs_setcover(seven_element_cover());
  const double M = 8;
  ASSERT_EQ(inst.n, 7);
  ASSERT_EQ(inst.scenario_count(), 8);
  // tool 1: first stage, then u1..u7, then the extra scenario
  std::vector<double> row{inst.first_stage[0]};
  for (int j = 0; j < 8; ++j) row.push_back(inst.scenario_costs[j][0]);
  EXPECT_EQ(row, (std::vector<double>{M, M, 0, 0, 0, M, M, M, M + 1}));
  std::vector<double> extra{inst.first_stage[6]};
  for (int j = 0; j < 8; ++j) extra.push_back(inst.scenario_costs[j][6]);
  EXPECT_EQ(extra, (std::vector<double>{2 * M, 2 * M, 2 * M, 2 * M, 2 * M, 2 * M, 2 * M, 2 * M, M}));
  for (double p : inst.probabilities) EXPECT_DOUBLE_EQ(p, 1.0 / 8);
  EXPECT_EQ(parse_instance(serialize_instance(inst)), inst);
}

TEST(RsSetCover, SevenElementRobustOptimum) {
  const auto inst = gen_rs_setcover(seven_element_cover());
  EXPECT_EQ(oracle::min_set_cover(seven_element_cover()), 3);
  EXPECT_NEAR(brute_force_optimum(inst, Objective::robust()).value, 59.0, 1e-9);
}

TEST(SpSetCover, SixElementRobustOptimum) {
  const auto inst = gen_sp_setcover(six_element_cover());
  EXPECT_EQ(oracle::min_set_cover(six_element_cover()), 3);
  EXPECT_NEAR(brute_force_optimum(inst, Objective::robust()).value, 3.0, 1e-9);
  EXPECT_NO_THROW(sp_decompose(inst.digraph()));
}

TEST(SpSetCover, SixElementExpectationDefersRareElements) {
  // Uniform probabilities let the expectation undercut the cover size.
  const auto inst = gen_sp_setcover(six_element_cover());
  EXPECT_LT(brute_force_optimum(inst, Objective::expected()).value, 3.0 - 1e-6);
}

TEST(SpSetCover, SingleSetCoveringEverything) {
  const auto inst = gen_sp_setcover({3, {{0, 1, 2}}});
  EXPECT_NEAR(brute_force_optimum(inst, Objective::robust()).value, 1.0, 1e-12);
}

TEST(SetCoverInput, RejectsUncoveredElement) {
  EXPECT_THROW(gen_rs_setcover({3, {{0, 1}}}), ValidationError);
  EXPECT_THROW(gen_sp_setcover({2, {{0, 2}}}), ValidationError);
}

TEST(Hamiltonian, CompleteDigraphIsZero) {
  Digraph g{4, {}, 0, 3};
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u != v) g.arcs.push_back({u, v});
  const auto inst = gen_sp_hamiltonian(g, 0, 3);
  EXPECT_EQ(inst.scenario_count(), 2);
  EXPECT_NEAR(brute_force_optimum(inst, Objective::expected()).value, 0.0, 1e-12);
}

TEST(Hamiltonian, MissingPathIsPositive) {
  // 0 -> 2 -> 1 is the only route through all nodes, but it ends at 1.
  Digraph g{3, {{0, 2}, {2, 1}}, 0, 2};
  EXPECT_GT(brute_force_optimum(gen_sp_hamiltonian(g, 0, 2), Objective::expected()).value, 0.0);
  EXPECT_NEAR(brute_force_optimum(gen_sp_hamiltonian(g, 0, 1), Objective::expected()).value, 0.0, 1e-12);
  Digraph empty{2, {}, 0, 1};
  EXPECT_GT(brute_force_optimum(gen_sp_hamiltonian(empty, 0, 1), Objective::expected()).value, 0.0);
}

TEST(Hamiltonian, AllThreeNodeDigraphs) {
  std::vector<Edge> all;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      if (u != v) all.push_back({u, v});
  for (unsigned mask = 0; mask < (1U << all.size()); ++mask) {
    Digraph g{3, {}, 0, 2};
    std::vector<std::vector<char>> adj(3, std::vector<char>(3, 0));
    for (std::size_t a = 0; a < all.size(); ++a)
      if ((mask >> a) & 1U) {
        g.arcs.push_back(all[a]);
        adj[all[a].first][all[a].second] = 1;
      }
    const bool ham = oracle::hamiltonian_path(3, adj, 0, 2);
    const double opt = brute_force_optimum(gen_sp_hamiltonian(g, 0, 2), Objective::expected()).value;
    EXPECT_EQ(opt < 1e-9, ham) << mask;
  }
}

TEST(Sat, SingleVariableFormulas) {
  const CnfInput sat{1, {{1}}};
  const auto a = gen_sp_sat(sat);
  const double mn = 1.0;
  EXPECT_LE(brute_force_optimum(a, Objective::expected()).value, mn + 1e-9);
  const CnfInput unsat{1, {{1}, {-1}}};
  const auto b = gen_sp_sat(unsat);
  EXPECT_GT(brute_force_optimum(b, Objective::expected()).value, 2.0 + 1e-9);
  EXPECT_FALSE(brute_force_decide(b, Objective::expected(), 2.0).has_value());
}

TEST(Sat, AgreesWithSatisfiabilityOnTwoVariables) {
  const std::vector<std::vector<int>> clauses{{1}, {-1}, {2}, {-2}, {1, 2}, {-1, 2}, {1, -2}, {-1, -2}};
  for (std::size_t a = 0; a < clauses.size(); ++a)
    for (std::size_t b = a + 1; b < clauses.size(); ++b) {
      const CnfInput f{2, {clauses[a], clauses[b]}};
      const double mn = 2.0 * 2;
      const bool got = brute_force_decide(gen_sp_sat(f), Objective::expected(), mn).has_value();
      EXPECT_EQ(got, oracle::satisfiable(f)) << a << " " << b;
    }
}

TEST(Sat, RejectsMalformedFormulas) {
  EXPECT_THROW(gen_sp_sat({1, {{}}}), ValidationError);
  EXPECT_THROW(gen_sp_sat({1, {{2}}}), ValidationError);
}

TEST(Chain, PreservesRsOptimum) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    RandomSpec spec;
    spec.family = Family::rs;
    spec.size = 5;
    spec.scenarios = 3;
    spec.seed = seed;
    const auto rs = rs_normalize(gen_random(spec));
    for (Family target : {Family::shortest_path, Family::spanning_tree}) {
      const auto chain = gen_chain(rs, target);
      for (const auto& obj : {Objective::expected(), Objective::robust(), Objective::conditional(0.3)})
        EXPECT_NEAR(brute_force_optimum(rs, obj).value, brute_force_optimum(chain, obj).value, 1e-9) << seed;
    }
  }
}

TEST(Chain, RejectsGroupedTools) {
  TwoStageInstance rs;
  rs.family = Family::rs;
  rs.n = 2;
  rs.first_stage = {1, 1};
  rs.scenario_costs = {{1, 1}};
  rs.probabilities = {1};
  rs.structure = RsPartition{{{0, 1}}};
  EXPECT_THROW(gen_chain(rs), UnsupportedError);
}

TEST(Random, SameSeedSameInstance) {
  for (Family f : {Family::rs, Family::selection, Family::shortest_path, Family::spanning_tree, Family::assignment}) {
    RandomSpec spec;
    spec.family = f;
    spec.size = 5;
    spec.scenarios = 3;
    spec.seed = 42;
    EXPECT_EQ(gen_random(spec), gen_random(spec)) << to_string(f);
    EXPECT_NO_THROW(validate(gen_random(spec)));
    auto other = spec;
    other.seed = 43;
    EXPECT_NE(serialize_instance(gen_random(spec)), serialize_instance(gen_random(other))) << to_string(f);
  }
}

TEST(Random, ZeroCostRangeGivesZeroOptimum) {
  RandomSpec spec;
  spec.family = Family::selection;
  spec.size = 5;
  spec.cost_lo = spec.cost_hi = 0;
  spec.seed = 1;
  EXPECT_EQ(brute_force_optimum(gen_random(spec), Objective::expected()).value, 0.0);
}

TEST(Random, SeriesParallelGraphsDecompose) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomSpec spec;
    spec.family = Family::shortest_path;
    spec.series_parallel = true;
    spec.seed = seed;
    EXPECT_NO_THROW(sp_decompose(gen_random(spec).digraph())) << seed;
  }
}
