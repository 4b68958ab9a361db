#pragma once

#include <Eigen/Core>
#include <span>
#include <variant>
#include <vector>

#include "wdrbo/distribution.hpp"

namespace wdrbo {

/// Radius schedule eps_t of the Wasserstein ball.
struct RadiusSchedule {
  enum class Kind { Constant, InverseSqrt, Explicit };
  Kind kind = Kind::Constant;
  double value = 0.0;          // eps (Constant) or eps_0 (InverseSqrt)
  std::vector<double> table;   // eps_1 .. eps_T (Explicit)

  static RadiusSchedule constant(double eps);
  static RadiusSchedule inverse_sqrt(double eps0);
  static RadiusSchedule explicit_table(std::vector<double> radii);

  /// eps_t for t >= 1.
  double at(int t) const;
};

/// Empirical center: uniform over the contexts seen before step t.
struct EmpiricalCenter {};
/// Parametric center: a fixed context distribution.
struct ParametricCenter {
  ContextDistribution distribution;
};

/// The ball center at one step: either finitely many atoms with uniform
/// weight, or a distribution that can only be sampled.
class CenterDistribution {
 public:
  explicit CenterDistribution(Eigen::MatrixXd atoms) : atoms_(std::move(atoms)) {}
  explicit CenterDistribution(ContextDistribution sampler) : sampler_(std::move(sampler)) {}

  bool enumerable() const { return !sampler_.has_value(); }
  /// Atoms of an enumerable center, one per row.
  const Eigen::MatrixXd& atoms() const;
  const ContextDistribution& sampler() const;
  /// Atoms when enumerable, otherwise n Monte-Carlo draws.
  Eigen::MatrixXd samples(Rng& rng, Eigen::Index n) const;

 private:
  Eigen::MatrixXd atoms_;
  std::optional<ContextDistribution> sampler_;
};

class AmbiguityModel {
 public:
  using Center = std::variant<EmpiricalCenter, ParametricCenter>;

  AmbiguityModel(Center center, RadiusSchedule radius, Box context_bounds);

  /// Appends an observed context c_t to the history.
  void record_context(const Eigen::VectorXd& c);

  /// Center P_hat_t. Empirical centers use c_1 .. c_{t-1}; with no history the
  /// center is a Dirac at the midpoint of the context box.
  CenterDistribution center_at(int t) const;
  double radius_at(int t) const { return radius_.at(t); }

  const Center& center() const { return center_; }
  const RadiusSchedule& radius() const { return radius_; }
  const Box& context_bounds() const { return bounds_; }
  const Eigen::MatrixXd& history() const { return history_; }
  bool empirical() const { return std::holds_alternative<EmpiricalCenter>(center_); }

 private:
  Center center_;
  RadiusSchedule radius_;
  Box bounds_;
  Eigen::MatrixXd history_;
};

/// Worst-case gap of an L-Lipschitz expectation over a ball of radius eps.
double robust_gap_bound(double epsilon, double lipschitz);

/// Type-1 Wasserstein distance between two equal-size 1-D empirical measures.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

/// Data-driven correction term rho_t = (1 + 2 L B_bar_t) / t. Reported only.
double data_driven_correction(int t, double kernel_lipschitz, double mean_norm_bound);

}  // namespace wdrbo
