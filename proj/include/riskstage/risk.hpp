#pragma once

// Risk functionals over finite discrete cost distributions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "riskstage/errors.hpp"

namespace riskstage {

struct Atom {
  double value;
  double probability;
};

/// Finite distribution of nonnegative costs. Probabilities are positive and
/// sum to one within 1e-9.
class DiscreteDistribution {
 public:
  static constexpr double kProbabilityTolerance = 1e-9;

  explicit DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("distribution has no atoms");
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (!(a.value >= 0.0) || !std::isfinite(a.value))
        throw ValidationError("distribution atom value must be finite and nonnegative");
      if (!(a.probability > 0.0) || a.probability > 1.0 + kProbabilityTolerance)
        throw ValidationError("distribution atom probability must lie in (0,1]");
      total += a.probability;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os << "probabilities sum to " << total;
      throw ValidationError(os.str());
    }
  }

  /// Builds a distribution from parallel value/probability vectors.
  static DiscreteDistribution from(const std::vector<double>& values,
                                   const std::vector<double>& probabilities) {
    if (values.size() != probabilities.size())
      throw ValidationError("value and probability vectors differ in length");
    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) atoms.push_back({values[k], probabilities[k]});
    return DiscreteDistribution(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double min_probability() const {
    double m = 1.0;
    for (const auto& a : atoms_) m = std::min(m, a.probability);
    return m;
  }

  /// Every value multiplied by `factor` (>= 0), probabilities unchanged.
  DiscreteDistribution scaled(double factor) const {
    if (!(factor >= 0.0)) throw DomainError("scale factor must be nonnegative");
    auto atoms = atoms_;
    for (auto& a : atoms) a.value *= factor;
    return DiscreteDistribution(std::move(atoms));
  }

 private:
  std::vector<Atom> atoms_;
};

inline double expectation(const DiscreteDistribution& d) {
  double sum = 0.0;
  for (const auto& a : d.atoms()) sum += a.probability * a.value;
  return sum;
}

/// Largest atom value; probabilities play no role.
inline double worst_case(const DiscreteDistribution& d) {
  double m = 0.0;
  for (const auto& a : d.atoms()) m = std::max(m, a.value);
  return m;
}

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in [0,1), got " << alpha;
    throw DomainError(os.str());
  }
}

/// Conditional value at risk,
///   inf_gamma  gamma + E[(Y - gamma)^+] / (1 - alpha).
/// The function of gamma is convex and piecewise linear with breakpoints at the
/// atom values, so the infimum is attained at one of them. alpha == 0 returns
/// the expectation itself.
inline double cvar(const DiscreteDistribution& d, double alpha) {
  check_alpha(alpha);
  if (alpha == 0.0) return expectation(d);
  const double scale = 1.0 / (1.0 - alpha);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& candidate : d.atoms()) {
    const double gamma = candidate.value;
    double excess = 0.0;
    for (const auto& a : d.atoms())
      if (a.value > gamma) excess += a.probability * (a.value - gamma);
    best = std::min(best, gamma + scale * excess);
  }
  return best;
}

/// min{1/pr_min, 1/(1-alpha)}: the factor by which CVaR can exceed the
/// expectation of a nonnegative variable.
inline double cvar_ratio_sigma(double alpha, double pr_min) {
  check_alpha(alpha);
  if (!(pr_min > 0.0 && pr_min <= 1.0))
    throw DomainError("minimum probability must lie in (0,1]");
  return std::min(1.0 / pr_min, 1.0 / (1.0 - alpha));
}

/// Criterion applied to the second-stage cost distribution.
struct Objective {
  enum class Kind { expectation, robust, cvar };

  Kind kind = Kind::expectation;
  double alpha = 0.0;

  static Objective expected() { return {Kind::expectation, 0.0}; }
  static Objective robust() { return {Kind::robust, 0.0}; }
  static Objective conditional(double alpha) {
    check_alpha(alpha);
    return {Kind::cvar, alpha};
  }

  double apply(const DiscreteDistribution& d) const {
    switch (kind) {
      case Kind::expectation:
        return expectation(d);
      case Kind::robust:
        return worst_case(d);
      case Kind::cvar:
        return cvar(d, alpha);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::expectation:
        return "expectation";
      case Kind::robust:
        return "robust";
      case Kind::cvar:
        return "cvar";
    }
    return "";
  }

  friend bool operator==(const Objective&, const Objective&) = default;
};

}  // namespace riskstage
