#pragma once

#include <Eigen/Core>

#include "wdrbo/kernel.hpp"

namespace wdrbo {

/// How the confidence multiplier beta_t is produced.
struct BetaMode {
  enum class Kind { Fixed, Theoretical };
  Kind kind = Kind::Fixed;
  double value = 1.5;  // used by Fixed only

  static BetaMode fixed(double v) { return {Kind::Fixed, v}; }
  static BetaMode theoretical() { return {Kind::Theoretical, 0.0}; }
};

struct SurrogateOptions {
  double lambda = 0.1;        // ridge regularizer
  double noise_bound = 1.0;   // R, sub-Gaussian noise level
  double norm_bound = 1.0;    // B, RKHS norm bound of the objective
  double delta = 0.05;        // failure probability
  BetaMode beta = BetaMode::fixed(1.5);

  void validate() const;
};

/// Posterior mean and scale at a batch of query points.
struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

/// Regularized least-squares estimator in the RKHS of a kernel.
///
///   mu(z)      = k(z)^T (K + lambda I)^{-1} y
///   sigma^2(z) = (k(z, z) - k(z)^T (K + lambda I)^{-1} k(z)) / lambda
///
/// The factor of K + lambda I (plus jitter, if escalation was needed) is kept
/// so that appending one observation costs O(t^2). Values are immutable once
/// built; `update` returns a new model.
class Surrogate {
 public:
  Surrogate(KernelSpec kernel, Eigen::Index dim, SurrogateOptions options = {});

  static Surrogate fit(KernelSpec kernel, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                       SurrogateOptions options = {});

  Surrogate update(const Eigen::VectorXd& z, double y) const;

  double posterior_mean(const Eigen::VectorXd& z) const;
  double posterior_std(const Eigen::VectorXd& z) const;
  /// Batched mean and scale; rows of Zq are query points.
  Prediction predict(const Eigen::MatrixXd& Zq) const;

  double ucb(const Eigen::VectorXd& z, double beta) const;
  double lcb(const Eigen::VectorXd& z, double beta) const;

  /// log det(I + K / lambda), read off the Cholesky factor.
  double information_gain() const;
  /// beta_t for a model fitted on t - 1 observations.
  double beta() const;
  /// Theoretical beta_t regardless of the configured mode.
  double theoretical_beta() const;
  /// B_bar_t = lambda^{-1/2} R sqrt(2 log(det(I + K/lambda)^{1/2} / delta)) + B.
  double mean_norm_bound() const;
  /// RKHS norm of the fitted mean, sqrt(alpha^T K alpha).
  double mean_rkhs_norm() const;

  Eigen::Index size() const { return Z_.rows(); }
  Eigen::Index dim() const { return dim_; }
  bool empty() const { return Z_.rows() == 0; }
  const KernelSpec& kernel() const { return kernel_; }
  const SurrogateOptions& options() const { return options_; }
  const Eigen::MatrixXd& inputs() const { return Z_; }
  const Eigen::VectorXd& targets() const { return y_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double jitter() const { return jitter_; }

 private:
  void factorize();
  void solve_alpha();
  double posterior_variance_from(double prior, double reduction) const;

  KernelSpec kernel_;
  Eigen::Index dim_;
  SurrogateOptions options_;
  Eigen::MatrixXd Z_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd chol_;  // lower triangular, chol chol^T = K + (lambda + jitter) I
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

}  // namespace wdrbo
