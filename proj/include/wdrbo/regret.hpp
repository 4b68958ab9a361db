#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wdrbo/environments.hpp"

namespace wdrbo {

/// Frozen Monte-Carlo sample of the true context distribution. All expected
/// values of one (environment, seed) pair are taken over the same panel.
struct EvaluationPanel {
  Eigen::MatrixXd contexts;  // one context per row

  static EvaluationPanel draw(const Environment& env, Eigen::Index mc_samples, std::uint64_t seed);
  /// Panel mean of f(x, c).
  double expected_value(const Environment& env, const Eigen::VectorXd& x) const;
};

struct Oracle {
  Eigen::VectorXd x;
  double value = 0.0;
};

/// Grid points per decision dimension used by the oracle: 2001 for d_x = 1,
/// 201 for d_x = 2, 41 above.
int default_oracle_grid(Eigen::Index dx);

/// argmax_x E_{c ~ panel} f(x, c): dense grid scan, then pattern search from the
/// best grid point. `grid_per_dim` = 0 picks default_oracle_grid.
Oracle oracle_best(const Environment& env, const EvaluationPanel& panel, int grid_per_dim = 0);

struct RegretValue {
  double clamped = 0.0;  // max(raw, 0)
  double raw = 0.0;
};

/// r_t = E f(x*, c) - E f(x_t, c) over the shared panel.
RegretValue instantaneous_regret(const Environment& env, const Oracle& oracle, const EvaluationPanel& panel,
                                 const Eigen::VectorXd& x);

struct StepRecord {
  int t = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd c;
  double y = 0.0;
  double epsilon = 0.0;
  double r_inst = 0.0;
  double r_raw = 0.0;
  double r_cum = 0.0;
  double elapsed_ms = 0.0;  // fit + acquisition only
};

struct RegretTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  Oracle oracle;
  std::vector<StepRecord> steps;
  std::string failure;  // nonempty when the run aborted

  int horizon() const { return static_cast<int>(steps.size()); }
  /// Appends a step and fills its cumulative regret.
  void push(StepRecord step);
};

std::vector<double> cumulative(std::span<const double> instantaneous);
std::vector<double> cumulative(const RegretTrace& trace);

}  // namespace wdrbo
