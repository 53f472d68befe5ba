#pragma once

// Scenario-set transforms.

#include <vector>

#include "riskstage/model.hpp"

namespace riskstage {

/// Prepends an all-zero scenario with probability alpha and scales every other
/// probability by 1 - alpha. The expectation of the original instance then
/// equals CVaR_alpha of the new one for every first stage.
inline TwoStageInstance augment_with_zero_scenario(const TwoStageInstance& inst, double alpha) {
  check_alpha(alpha);
  if (alpha == 0.0) throw DomainError("alpha = 0 would create a zero-probability scenario");
  validate(inst);
  TwoStageInstance out = inst;
  out.scenario_costs.insert(out.scenario_costs.begin(), std::vector<double>(inst.n, 0.0));
  out.probabilities.clear();
  out.probabilities.push_back(alpha);
  for (double p : inst.probabilities) out.probabilities.push_back(p * (1.0 - alpha));
  out.alpha = alpha;
  return out;
}

}  // namespace riskstage
