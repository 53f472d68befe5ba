#pragma once

// Dense bounded-variable primal simplex and budget bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "riskstage/errors.hpp"

namespace riskstage {

enum class Relation { le, eq, ge };

struct LpRow {
  std::vector<std::pair<int, double>> coefficients;  // (variable, coefficient)
  Relation relation = Relation::le;
  double rhs = 0.0;
};

/// min objective . x  subject to rows and lower <= x <= upper. Lower bounds
/// may be -inf, upper bounds +inf.
struct LpProblem {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int variable_count = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  int add_variable(double lo = 0.0, double hi = kInf, double cost = 0.0) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return variable_count++;
  }

  void add_row(std::vector<std::pair<int, double>> coefficients, Relation relation, double rhs) {
    rows.push_back({std::move(coefficients), relation, rhs});
  }
};

enum class LpVerdict { optimal, infeasible, unbounded };

struct LpOutcome {
  LpVerdict verdict = LpVerdict::infeasible;
  std::vector<double> values;
  double objective_value = 0.0;

  bool feasible() const { return verdict != LpVerdict::infeasible; }
};

/// Pivot limit exceeded. Distinct from an infeasible verdict.
class LpStalledError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// Tableau over nonnegative columns with finite or infinite upper bounds. Every
/// row is  sum_k a_k z_k = b  with b >= 0 and a starting basis of slacks or
/// artificials.
class BoundedSimplex {
 public:
  static constexpr double kPivotTol = 1e-9;
  static constexpr long kPivotCap = 1'000'000;
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  BoundedSimplex(std::vector<std::vector<double>> t, std::vector<double> upper, std::vector<int> basis,
                 std::vector<double> basic_value)
      : t_(std::move(t)), upper_(std::move(upper)), basis_(std::move(basis)), xb_(std::move(basic_value)) {
    cols_ = static_cast<int>(upper_.size());
    at_upper_.assign(cols_, 0);
    is_basic_.assign(cols_, -1);
    for (std::size_t r = 0; r < basis_.size(); ++r) is_basic_[basis_[r]] = static_cast<int>(r);
  }

  /// Runs simplex for `cost`. Returns false when unbounded.
  bool optimize(const std::vector<double>& cost) {
    const int m = static_cast<int>(basis_.size());
    d_ = cost;
    for (int r = 0; r < m; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int k = 0; k < cols_; ++k) d_[k] -= cb * t_[r][k];
    }
    for (;;) {
      if (++pivots_ > kPivotCap) throw LpStalledError("simplex stalled after the pivot cap");
      int enter = -1;
      for (int k = 0; k < cols_ && enter < 0; ++k) {
        if (is_basic_[k] >= 0 || upper_[k] == 0.0) continue;
        if ((!at_upper_[k] && d_[k] < -kPivotTol) || (at_upper_[k] && d_[k] > kPivotTol)) enter = k;
      }
      if (enter < 0) return true;
      const double dir = at_upper_[enter] ? -1.0 : 1.0;
      double step = upper_[enter];
      int leave = -1;
      bool leave_to_upper = false;
      for (int r = 0; r < m; ++r) {
        const double a = dir * t_[r][enter];
        double limit;
        bool to_upper;
        if (a > kPivotTol) {
          limit = std::max(0.0, xb_[r]) / a;
          to_upper = false;
        } else if (a < -kPivotTol && upper_[basis_[r]] < kInfinity) {
          limit = std::max(0.0, upper_[basis_[r]] - xb_[r]) / -a;
          to_upper = true;
        } else {
          continue;
        }
        if (limit < step || (leave >= 0 && limit == step && basis_[r] < basis_[leave])) {
          step = limit;
          leave = r;
          leave_to_upper = to_upper;
        }
      }
      if (step == kInfinity) return false;
      for (int r = 0; r < m; ++r) xb_[r] -= dir * step * t_[r][enter];
      if (leave < 0) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      const double entered = (at_upper_[enter] ? upper_[enter] : 0.0) + dir * step;
      const int old = basis_[leave];
      at_upper_[old] = leave_to_upper;
      pivot(leave, enter);
      xb_[leave] = entered;
    }
  }

  /// Pivots a basic column out of row r if any eligible column has a usable
  /// entry there. The move is degenerate up to round-off.
  bool drive_out(int r, int column_limit) {
    for (int k = 0; k < column_limit; ++k) {
      if (is_basic_[k] >= 0 || std::abs(t_[r][k]) <= kPivotTol) continue;
      const double delta = xb_[r] / t_[r][k];
      const int m = static_cast<int>(basis_.size());
      for (int i = 0; i < m; ++i) xb_[i] -= delta * t_[i][k];
      const double entered = (at_upper_[k] ? upper_[k] : 0.0) + delta;
      at_upper_[basis_[r]] = 0;
      pivot(r, k);
      xb_[r] = entered;
      return true;
    }
    return false;
  }

  void fix_column(int k) { upper_[k] = 0.0; }
  int basic_in_row(int r) const { return basis_[r]; }
  int rows() const { return static_cast<int>(basis_.size()); }

  std::vector<double> values() const {
    std::vector<double> z(cols_, 0.0);
    for (int k = 0; k < cols_; ++k)
      if (at_upper_[k]) z[k] = upper_[k];
    for (std::size_t r = 0; r < basis_.size(); ++r) z[basis_[r]] = xb_[r];
    return z;
  }

 private:
  void pivot(int r, int k) {
    const int m = static_cast<int>(basis_.size());
    auto& row = t_[r];
    const double piv = row[k];
    for (double& v : row) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = t_[i][k];
      if (f == 0.0) continue;
      auto& other = t_[i];
      for (int c = 0; c < cols_; ++c) other[c] -= f * row[c];
      other[k] = 0.0;
    }
    const double f = d_.empty() ? 0.0 : d_[k];
    if (f != 0.0) {
      for (int c = 0; c < cols_; ++c) d_[c] -= f * row[c];
      d_[k] = 0.0;
    }
    is_basic_[basis_[r]] = -1;
    basis_[r] = k;
    is_basic_[k] = r;
  }

  std::vector<std::vector<double>> t_;
  std::vector<double> upper_;
  std::vector<int> basis_;
  std::vector<double> xb_;
  std::vector<double> d_;
  std::vector<char> at_upper_;
  std::vector<int> is_basic_;
  int cols_ = 0;
  long pivots_ = 0;
};

}  // namespace detail

inline void check_problem(const LpProblem& p) {
  const auto n = static_cast<std::size_t>(p.variable_count);
  if (p.objective.size() != n || p.lower.size() != n || p.upper.size() != n)
    throw ValidationError("lp vectors must have variable_count entries");
  for (std::size_t v = 0; v < n; ++v) {
    if (std::isnan(p.lower[v]) || std::isnan(p.upper[v]) || p.lower[v] > p.upper[v] ||
        p.lower[v] == LpProblem::kInf || p.upper[v] == -LpProblem::kInf)
      throw ValidationError("lp variable " + std::to_string(v) + " has inconsistent bounds");
    if (!std::isfinite(p.objective[v])) throw ValidationError("lp objective must be finite");
  }
  for (const auto& row : p.rows) {
    if (!std::isfinite(row.rhs)) throw ValidationError("lp right-hand sides must be finite");
    for (const auto& [v, a] : row.coefficients)
      if (v < 0 || v >= p.variable_count || !std::isfinite(a))
        throw ValidationError("lp row refers to an unknown variable or has a non-finite coefficient");
  }
}

/// Two-phase bounded-variable primal simplex with Bland's rule. Variables are
/// shifted to a zero lower bound; a variable with only an upper bound is
/// mirrored and a free variable is split into two nonnegative parts.
inline LpOutcome lp_solve(const LpProblem& p) {
  check_problem(p);
  constexpr double inf = LpProblem::kInf;
  const int nv = p.variable_count;

  // Column layout: one or two columns per original variable, then slacks,
  // then artificials.
  struct Map {
    int col;
    double sign;
    double shift;
    int neg_col;  // second column of a split free variable, or -1
  };
  std::vector<Map> map(nv);
  std::vector<double> upper;
  std::vector<double> cost;
  for (int v = 0; v < nv; ++v) {
    const double lo = p.lower[v], hi = p.upper[v];
    if (lo > -inf) {
      map[v] = {static_cast<int>(upper.size()), 1.0, lo, -1};
      upper.push_back(hi - lo);
      cost.push_back(p.objective[v]);
    } else if (hi < inf) {
      map[v] = {static_cast<int>(upper.size()), -1.0, hi, -1};
      upper.push_back(inf);
      cost.push_back(-p.objective[v]);
    } else {
      map[v] = {static_cast<int>(upper.size()), 1.0, 0.0, static_cast<int>(upper.size()) + 1};
      upper.push_back(inf);
      upper.push_back(inf);
      cost.push_back(p.objective[v]);
      cost.push_back(-p.objective[v]);
    }
  }
  const int structural = static_cast<int>(upper.size());
  const int m = static_cast<int>(p.rows.size());

  // Rows as  a.z + s = b  with the slack bound encoding the relation.
  std::vector<std::vector<double>> a(m);
  std::vector<double> b(m);
  std::vector<int> slack_col(m, -1);
  for (int r = 0; r < m; ++r) {
    const auto& row = p.rows[r];
    double sign = row.relation == Relation::ge ? -1.0 : 1.0;
    std::vector<double> dense(structural, 0.0);
    double rhs = row.rhs;
    for (const auto& [v, coef] : row.coefficients) {
      const auto& mp = map[v];
      dense[mp.col] += coef * mp.sign;
      if (mp.neg_col >= 0) dense[mp.neg_col] -= coef;
      rhs -= coef * mp.shift;
    }
    for (double& c : dense) c *= sign;
    rhs *= sign;
    a[r] = std::move(dense);
    b[r] = rhs;
    if (row.relation != Relation::eq) {
      slack_col[r] = static_cast<int>(upper.size());
      upper.push_back(inf);
      cost.push_back(0.0);
    }
  }
  const int before_artificial = static_cast<int>(upper.size());

  std::vector<int> basis(m);
  std::vector<double> xb(m);
  std::vector<int> artificial_rows;
  for (int r = 0; r < m; ++r) {
    if (b[r] < 0.0) {
      for (double& c : a[r]) c = -c;
      b[r] = -b[r];
      // The slack now carries coefficient -1 and cannot start in the basis.
      if (slack_col[r] >= 0) slack_col[r] = -(slack_col[r] + 2);
    }
    xb[r] = b[r];
    if (slack_col[r] >= 0) {
      basis[r] = slack_col[r];
    } else {
      basis[r] = static_cast<int>(upper.size());
      upper.push_back(inf);
      cost.push_back(0.0);
      artificial_rows.push_back(r);
    }
  }
  const int cols = static_cast<int>(upper.size());
  std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
  for (int r = 0; r < m; ++r) {
    std::copy(a[r].begin(), a[r].end(), t[r].begin());
    const int s = slack_col[r];
    if (s >= 0) t[r][s] = 1.0;
    if (s < -1) t[r][-s - 2] = -1.0;
    if (basis[r] >= before_artificial) t[r][basis[r]] = 1.0;
  }

  detail::BoundedSimplex simplex(std::move(t), upper, basis, xb);
  if (!artificial_rows.empty()) {
    std::vector<double> phase1(cols, 0.0);
    for (int k = before_artificial; k < cols; ++k) phase1[k] = 1.0;
    simplex.optimize(phase1);
    const auto z = simplex.values();
    double infeasibility = 0.0, scale = 1.0;
    for (int k = before_artificial; k < cols; ++k) infeasibility += z[k];
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (infeasibility > 1e-9 * scale) return {};
    for (int k = before_artificial; k < cols; ++k) simplex.fix_column(k);
    for (int r = 0; r < simplex.rows(); ++r)
      if (simplex.basic_in_row(r) >= before_artificial) simplex.drive_out(r, before_artificial);
  }

  LpOutcome out;
  if (!simplex.optimize(cost)) {
    out.verdict = LpVerdict::unbounded;
    return out;
  }
  const auto z = simplex.values();
  out.verdict = LpVerdict::optimal;
  out.values.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const auto& mp = map[v];
    double val = mp.shift + mp.sign * z[mp.col];
    if (mp.neg_col >= 0) val -= z[mp.neg_col];
    out.values[v] = std::clamp(val, p.lower[v], p.upper[v]);
  }
  for (int v = 0; v < nv; ++v) out.objective_value += p.objective[v] * out.values[v];
  return out;
}

struct BudgetResult {
  double budget = 0.0;
  LpOutcome witness;
};

/// Smallest L in [lo, hi] with probe(L) feasible, to absolute tolerance
/// 1e-7 * max(1, hi). probe(L) must be monotone in L; a violation found by
/// the closing re-check at L - 2 tol raises an error.
inline BudgetResult min_feasible_budget_probe(const std::function<LpOutcome(double)>& probe, double lo,
                                              double hi) {
  if (!(lo <= hi)) throw DomainError("budget interval is empty");
  BudgetResult best{hi, probe(hi)};
  if (!best.witness.feasible()) throw InfeasibleError("no feasible budget");
  const double tol = 1e-7 * std::max(1.0, std::abs(hi));
  if (auto at_lo = probe(lo); at_lo.feasible()) return {lo, std::move(at_lo)};
  double left = lo;
  while (best.budget - left > tol) {
    const double mid = 0.5 * (left + best.budget);
    auto outcome = probe(mid);
    if (outcome.feasible())
      best = {mid, std::move(outcome)};
    else
      left = mid;
  }
  const double check = best.budget - 2.0 * tol;
  if (check > lo && probe(check).feasible()) {
    std::ostringstream os;
    os << "budget feasibility is not monotone: feasible at " << check << " but not at " << left;
    throw Error(os.str());
  }
  return best;
}

inline BudgetResult min_feasible_budget(const std::function<LpProblem(double)>& builder, double lo, double hi) {
  return min_feasible_budget_probe([&](double budget) { return lp_solve(builder(budget)); }, lo, hi);
}

}  // namespace riskstage
