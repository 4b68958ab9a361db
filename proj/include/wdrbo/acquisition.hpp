#pragma once

#include <Eigen/Core>

#include "wdrbo/distribution.hpp"
#include "wdrbo/optimizer.hpp"
#include "wdrbo/surrogate.hpp"

namespace wdrbo {

/// How L^UCB(x), the Lipschitz constant of c -> UCB(x, c), is obtained.
struct LipschitzMode {
  enum class Kind { Analytic, Numeric };
  Kind kind = Kind::Numeric;
  int grid = 32;  // points per context dimension (Numeric)

  static LipschitzMode analytic() { return {Kind::Analytic, 0}; }
  static LipschitzMode numeric(int grid = 32) { return {Kind::Numeric, grid}; }
};

/// Everything the robust acquisition needs at one step.
///
/// `center_samples` are the atoms (or Monte-Carlo draws) of the ball center,
/// one context per row. The model is borrowed and must outlive the problem.
struct AcquisitionProblem {
  const Surrogate& model;
  double beta = 1.5;
  Box x_bounds;
  Box c_bounds;
  Eigen::MatrixXd center_samples;
  double epsilon = 0.0;
  LipschitzMode lipschitz = LipschitzMode::numeric();
  MultiStartConfig optimizer{};

  void validate() const;
};

/// Rows [x, c_i] for every row c_i of `contexts`.
Eigen::MatrixXd join_inputs(const Eigen::VectorXd& x, const Eigen::MatrixXd& contexts);

/// Mean of UCB(x, c) over the center samples.
double expected_ucb(const AcquisitionProblem& p, const Eigen::VectorXd& x);

/// Context region scanned by the numeric Lipschitz estimate: the bounding box
/// of the center samples widened by epsilon per side, clipped to c_bounds.
Box lipschitz_region(const AcquisitionProblem& p);

/// Analytic: 2 B_bar_t L, independent of x. Numeric: 1.1 times the largest
/// central-difference gradient norm of c -> UCB(x, c) over a grid of
/// lipschitz_region(p).
double ucb_context_lipschitz(const AcquisitionProblem& p, const Eigen::VectorXd& x);

/// Largest central-difference gradient norm of c -> mu(x, c) + beta sigma(x, c)
/// over a per-dimension grid of the context box, without the safety factor.
double max_context_slope(const Surrogate& model, double beta, const Eigen::VectorXd& x, const Box& c_bounds,
                         int grid);

/// expected_ucb(x) - epsilon * L^UCB(x). With epsilon = 0 the Lipschitz term
/// is skipped and the result equals expected_ucb bit for bit.
double robust_value(const AcquisitionProblem& p, const Eigen::VectorXd& x);

Maximum maximize(const AcquisitionProblem& p);

/// Box [mean - std, mean + std] per context dimension of the history,
/// intersected with `c_bounds`; the full box when there is no history.
Box stableopt_context_box(const Eigen::MatrixXd& history, const Box& c_bounds);

/// argmax_x min_{c in grid(C_t)} UCB(x, c).
Maximum stableopt_select(const Surrogate& model, double beta, const Box& x_bounds, const Box& context_box,
                         int context_grid, const MultiStartConfig& optimizer);

/// argmax_x mu(x) + beta sigma(x) for a model fitted on decisions only.
Maximum gpucb_select(const Surrogate& model_x, double beta, const Box& x_bounds, const MultiStartConfig& optimizer);

}  // namespace wdrbo
