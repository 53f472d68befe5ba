#include <gtest/gtest.h>

#include "oracles.hpp"
#include "riskstage/risk.hpp"
#include "riskstage/random.hpp"
#include "riskstage/transforms.hpp"
#include "riskstage/exact.hpp"

using namespace riskstage;

namespace {

DiscreteDistribution dist(std::vector<double> v, std::vector<double> p) { return DiscreteDistribution::from(v, p); }

}  // namespace

TEST(Cvar, TwoAtomTail) {
  auto d = dist({0, 10}, {0.5, 0.5});
  EXPECT_NEAR(cvar(d, 0.0), 5.0, 1e-12);
  EXPECT_NEAR(cvar(d, 0.5), 10.0, 1e-12);
  EXPECT_NEAR(cvar(d, 0.25), 0.25 / 0.75 * 0 + 10 * 0.5 / 0.75, 1e-12);
}

TEST(Cvar, DegenerateAtom) { EXPECT_DOUBLE_EQ(cvar(dist({5}, {1.0}), 0.7), 5.0); }

TEST(Cvar, AlphaZeroIsExpectationBitForBit) {
  auto d = dist({0.1, 0.7, 3.3}, {0.2, 0.3, 0.5});
  EXPECT_EQ(cvar(d, 0.0), expectation(d));
}

TEST(Cvar, RejectsAlphaOutsideRange) {
  auto d = dist({1}, {1});
  EXPECT_THROW(cvar(d, 1.0), DomainError);
  EXPECT_THROW(cvar(d, -0.1), DomainError);
}

TEST(Cvar, RejectsBadDistributions) {
  EXPECT_THROW(dist({1, 2}, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(dist({-1}, {1}), ValidationError);
  EXPECT_THROW(dist({1, 2}, {1.0, 0.0}), ValidationError);
  EXPECT_THROW(DiscreteDistribution({}), ValidationError);
}

TEST(Cvar, MatchesSortedTailOracle) {
  SplitMix64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int k = static_cast<int>(rng.uniform_int(1, 8));
    std::vector<double> v(k), w(k);
    double total = 0;
    for (int i = 0; i < k; ++i) {
      v[i] = rng.uniform_int(0, 20);
      total += (w[i] = rng.uniform_int(1, 9));
    }
    for (auto& x : w) x /= total;
    const double alpha = rng.uniform01() * 0.95;
    EXPECT_NEAR(cvar(dist(v, w), alpha), oracle::cvar_sorted(v, w, alpha), 1e-9);
  }
}

TEST(Cvar, MonotoneInAlphaAndBoundedByMax) {
  auto d = dist({1, 4, 9, 2}, {0.1, 0.2, 0.3, 0.4});
  double prev = 0.0;
  for (double a = 0.0; a < 0.99; a += 0.05) {
    const double c = cvar(d, a);
    EXPECT_GE(c, prev - 1e-12);
    EXPECT_LE(c, worst_case(d) + 1e-12);
    prev = c;
  }
}

TEST(Cvar, HomogeneousAndMonotone) {
  auto d = dist({1, 4, 9}, {0.3, 0.3, 0.4});
  EXPECT_NEAR(cvar(d.scaled(2.5), 0.4), 2.5 * cvar(d, 0.4), 1e-12);
  auto bigger = dist({2, 4, 10}, {0.3, 0.3, 0.4});
  EXPECT_LE(cvar(d, 0.6), cvar(bigger, 0.6));
}

TEST(Sigma, ClosedForms) {
  EXPECT_DOUBLE_EQ(cvar_ratio_sigma(0.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(cvar_ratio_sigma(0.9, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(cvar_ratio_sigma(0.5, 0.1), 2.0);
  EXPECT_THROW(cvar_ratio_sigma(0.5, 0.0), DomainError);
}

TEST(Objective, Dispatch) {
  auto d = dist({0, 10}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(Objective::expected().apply(d), 5.0);
  EXPECT_DOUBLE_EQ(Objective::robust().apply(d), 10.0);
  EXPECT_DOUBLE_EQ(Objective::conditional(0.5).apply(d), 10.0);
  EXPECT_EQ(Objective::conditional(0.2).name(), "cvar");
}

TEST(ZeroScenario, LayoutAndIdentity) {
  RandomSpec spec;
  spec.family = Family::selection;
  spec.size = 5;
  spec.scenarios = 3;
  spec.seed = 9;
  const auto inst = gen_random(spec);
  const auto aug = augment_with_zero_scenario(inst, 0.4);
  ASSERT_EQ(aug.scenario_count(), 4);
  EXPECT_DOUBLE_EQ(aug.probabilities[0], 0.4);
  for (double c : aug.scenario_costs[0]) EXPECT_EQ(c, 0.0);
  for (std::uint64_t m = 0; m < 32; ++m) {
    auto x = oracle::from_mask(m, 5);
    if (std::count(x.begin(), x.end(), 1) > inst.cardinality().p) continue;
    EXPECT_NEAR(evaluate_first_stage(inst, x, Objective::expected()),
                evaluate_first_stage(aug, x, Objective::conditional(0.4)), 1e-9);
  }
  EXPECT_THROW(augment_with_zero_scenario(inst, 0.0), DomainError);
  EXPECT_THROW(augment_with_zero_scenario(inst, 1.0), DomainError);
}
