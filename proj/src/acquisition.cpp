#include "wdrbo/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "wdrbo/ambiguity.hpp"
#include "wdrbo/errors.hpp"

namespace wdrbo {

namespace {

constexpr double kLipschitzSafety = 1.1;
constexpr double kStepFraction = 1e-4;

Eigen::VectorXd ucb_values(const Surrogate& model, const Eigen::MatrixXd& Zq, double beta) {
  const Prediction pred = model.predict(Zq);
  return pred.mean + beta * pred.std;
}

}  // namespace

void AcquisitionProblem::validate() const {
  if (!(epsilon >= 0.0)) throw InputError("acquisition: epsilon must be >= 0");
  if (center_samples.rows() == 0) throw InputError("acquisition: center samples must be nonempty");
  if (center_samples.cols() != c_bounds.dim()) throw InputError("acquisition: center samples dimension mismatch");
  if (x_bounds.dim() + c_bounds.dim() != model.dim()) {
    throw InputError("acquisition: x and c boxes do not add up to the model input dimension");
  }
  if (lipschitz.kind == LipschitzMode::Kind::Numeric && lipschitz.grid < 1) {
    throw InputError("acquisition: numeric Lipschitz grid must be >= 1");
  }
  optimizer.validate();
}

Eigen::MatrixXd join_inputs(const Eigen::VectorXd& x, const Eigen::MatrixXd& contexts) {
  Eigen::MatrixXd Z(contexts.rows(), x.size() + contexts.cols());
  Z.leftCols(x.size()).rowwise() = x.transpose();
  Z.rightCols(contexts.cols()) = contexts;
  return Z;
}

double expected_ucb(const AcquisitionProblem& p, const Eigen::VectorXd& x) {
  return ucb_values(p.model, join_inputs(x, p.center_samples), p.beta).mean();
}

double max_context_slope(const Surrogate& model, double beta, const Eigen::VectorXd& x, const Box& c_bounds,
                         int grid) {
  const Eigen::Index dc = c_bounds.dim();
  const Eigen::MatrixXd nodes = tensor_grid(c_bounds, grid);
  const double h = kStepFraction * std::max(c_bounds.diameter(), 1e-12);

  // Row layout: node n, dimension j, sign s -> 2 (n dc + j) + s.
  Eigen::MatrixXd stencil(2 * nodes.rows() * dc, dc);
  for (Eigen::Index n = 0; n < nodes.rows(); ++n) {
    for (Eigen::Index j = 0; j < dc; ++j) {
      const Eigen::Index r = 2 * (n * dc + j);
      stencil.row(r) = nodes.row(n);
      stencil.row(r + 1) = nodes.row(n);
      stencil(r, j) += h;
      stencil(r + 1, j) -= h;
    }
  }
  const Eigen::VectorXd u = ucb_values(model, join_inputs(x, stencil), beta);
  double worst = 0.0;
  for (Eigen::Index n = 0; n < nodes.rows(); ++n) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < dc; ++j) {
      const Eigen::Index r = 2 * (n * dc + j);
      const double g = (u(r) - u(r + 1)) / (2.0 * h);
      sq += g * g;
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

Box lipschitz_region(const AcquisitionProblem& p) {
  const Eigen::VectorXd lo = p.center_samples.colwise().minCoeff().transpose();
  const Eigen::VectorXd hi = p.center_samples.colwise().maxCoeff().transpose();
  const Eigen::VectorXd pad = Eigen::VectorXd::Constant(lo.size(), p.epsilon);
  const Eigen::VectorXd a = p.c_bounds.clamp(lo - pad);
  const Eigen::VectorXd b = p.c_bounds.clamp(hi + pad);
  return Box(a, b.cwiseMax(a));
}

double ucb_context_lipschitz(const AcquisitionProblem& p, const Eigen::VectorXd& x) {
  if (p.lipschitz.kind == LipschitzMode::Kind::Analytic) {
    const double diameter = std::hypot(p.x_bounds.diameter(), p.c_bounds.diameter());
    return 2.0 * p.model.mean_norm_bound() * lipschitz_constant(p.model.kernel(), diameter);
  }
  return kLipschitzSafety * max_context_slope(p.model, p.beta, x, lipschitz_region(p), p.lipschitz.grid);
}

double robust_value(const AcquisitionProblem& p, const Eigen::VectorXd& x) {
  const double value = expected_ucb(p, x);
  if (p.epsilon == 0.0) return value;
  return value - robust_gap_bound(p.epsilon, ucb_context_lipschitz(p, x));
}

Maximum maximize(const AcquisitionProblem& p) {
  p.validate();
  return maximize_on_box([&p](const Eigen::VectorXd& x) { return robust_value(p, x); }, p.x_bounds, p.optimizer);
}

Box stableopt_context_box(const Eigen::MatrixXd& history, const Box& c_bounds) {
  if (history.rows() == 0) return c_bounds;
  if (history.cols() != c_bounds.dim()) throw InputError("stableopt: context history dimension mismatch");
  const auto [mean, std] = column_moments(history);
  Eigen::VectorXd lo = c_bounds.clamp(mean - std);
  Eigen::VectorXd hi = c_bounds.clamp(mean + std);
  return Box(std::move(lo), std::move(hi));
}

Maximum stableopt_select(const Surrogate& model, double beta, const Box& x_bounds, const Box& context_box,
                         int context_grid, const MultiStartConfig& optimizer) {
  if (context_grid < 1) throw InputError("stableopt: context grid must be >= 1");
  const Eigen::MatrixXd nodes = tensor_grid(context_box, context_grid);
  auto worst_case = [&](const Eigen::VectorXd& x) {
    return ucb_values(model, join_inputs(x, nodes), beta).minCoeff();
  };
  return maximize_on_box(worst_case, x_bounds, optimizer);
}

Maximum gpucb_select(const Surrogate& model_x, double beta, const Box& x_bounds, const MultiStartConfig& optimizer) {
  if (model_x.dim() != x_bounds.dim()) throw InputError("gpucb: model must be fitted on decision inputs only");
  auto ucb = [&](const Eigen::VectorXd& x) {
    return ucb_values(model_x, Eigen::MatrixXd(x.transpose()), beta)(0);
  };
  return maximize_on_box(ucb, x_bounds, optimizer);
}

}  // namespace wdrbo
