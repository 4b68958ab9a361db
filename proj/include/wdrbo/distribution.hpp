#pragma once

#include <Eigen/Core>
#include <optional>
#include <random>
#include <string>

namespace wdrbo {

using Rng = std::mt19937_64;

/// Axis-aligned box [lo, hi].
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_);
  static Box cube(Eigen::Index dim, double lo, double hi);

  Eigen::Index dim() const { return lo.size(); }
  Eigen::VectorXd width() const { return hi - lo; }
  Eigen::VectorXd midpoint() const { return 0.5 * (lo + hi); }
  double diameter() const { return width().norm(); }
  bool contains(const Eigen::VectorXd& p, double tol = 1e-12) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& p) const;
};

/// Product distribution over context vectors: independent normal (optionally
/// clipped to a box) or independent uniform coordinates.
struct ContextDistribution {
  enum class Kind { Normal, Uniform };
  Kind kind = Kind::Normal;
  Eigen::VectorXd a;  // mean (Normal) or lower bound (Uniform)
  Eigen::VectorXd b;  // std (Normal) or upper bound (Uniform)
  std::optional<Box> clip;

  static ContextDistribution normal(Eigen::VectorXd mean, Eigen::VectorXd std,
                                    std::optional<Box> clip = std::nullopt);
  static ContextDistribution uniform(Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const { return a.size(); }
  Eigen::VectorXd sample(Rng& rng) const;
  /// n samples, one per row.
  Eigen::MatrixXd sample(Rng& rng, Eigen::Index n) const;
  /// Smallest box containing the support, if the support is bounded.
  std::optional<Box> support() const;
  std::string describe() const;
};

/// Population mean and standard deviation per column.
std::pair<Eigen::VectorXd, Eigen::VectorXd> column_moments(const Eigen::MatrixXd& samples);

}  // namespace wdrbo
