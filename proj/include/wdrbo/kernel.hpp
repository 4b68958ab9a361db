#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "wdrbo/errors.hpp"

namespace wdrbo {

enum class KernelFamily { SquaredExponential, Matern52 };

/// Stationary kernel on Z = X x C, k(z, z') = s * r(||(z - z') / l||).
///
/// Lengthscales are per input dimension in the raw coordinates of Z. A single
/// entry is treated as isotropic and broadcast to any dimension.
struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  Eigen::VectorXd lengthscale = Eigen::VectorXd::Ones(1);
  double output_scale = 1.0;

  static KernelSpec squared_exponential(Eigen::VectorXd lengthscale, double output_scale = 1.0);
  static KernelSpec matern52(Eigen::VectorXd lengthscale, double output_scale = 1.0);

  bool isotropic() const { return lengthscale.size() == 1; }
  /// Throws InputError when lengthscales or scale are not strictly positive.
  void validate() const;
  /// Throws InputError when the lengthscale vector does not fit dimension d.
  void check_dimension(Eigen::Index d) const;
  /// Kernel restricted to the leading `count` input dimensions.
  KernelSpec head(Eigen::Index count) const;
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Radial profile r(u) with u the lengthscale-scaled distance, r(0) = 1.
double radial_profile(KernelFamily family, double u);

/// Second derivative of the radial profile with respect to u.
double radial_profile_second_derivative(KernelFamily family, double u);

/// Lengthscale-scaled Euclidean distance between two points.
template <typename DerivedA, typename DerivedB>
double scaled_distance(const KernelSpec& k, const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw InputError("kernel: point dimensions differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (!k.isotropic() && k.lengthscale.size() != a.size()) {
    throw InputError("kernel: lengthscale has " + std::to_string(k.lengthscale.size()) +
                     " entries, point has " + std::to_string(a.size()));
  }
  // Coefficient loop so row and column vector arguments mix freely.
  double sq = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = (a.coeff(i) - b.coeff(i)) / k.lengthscale[k.isotropic() ? 0 : i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

template <typename DerivedA, typename DerivedB>
double eval(const KernelSpec& k, const Eigen::MatrixBase<DerivedA>& a,
            const Eigen::MatrixBase<DerivedB>& b) {
  return k.output_scale * radial_profile(k.family, scaled_distance(k, a, b));
}

/// Gram matrix of the rows of Z.
Eigen::MatrixXd gram(const KernelSpec& k, const Eigen::MatrixXd& Z);

/// Cross-covariance matrix, entry (i, j) = k(A_i, B_j) over rows.
Eigen::MatrixXd cross_gram(const KernelSpec& k, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Kernel-induced distance ||k(., z) - k(., z')|| in the RKHS.
template <typename DerivedA, typename DerivedB>
double feature_distance(const KernelSpec& k, const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  const double radicand = eval(k, a, a) + eval(k, b, b) - 2.0 * eval(k, a, b);
  if (radicand < -1e-12) throw NumericalError("feature_distance: negative radicand");
  return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

/// Constant L with feature_distance(z, z') <= L ||z - z'|| for all z, z'.
///
/// SquaredExponential uses the closed form sqrt(s) / min(l). Matern52 maximizes
/// sqrt(-r''(u)) over a 10^4 point grid on [0, diameter / min(l)]; the maximum
/// sits at u = 0 for both families.
double lipschitz_constant(const KernelSpec& k, double diameter = 10.0);

}  // namespace wdrbo
