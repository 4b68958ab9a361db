#include "wdrbo/kernel.hpp"

#include <algorithm>

namespace wdrbo {

namespace {

constexpr double kSqrt5 = 2.23606797749978969641;

Eigen::MatrixXd scale_rows(const KernelSpec& k, const Eigen::MatrixXd& M) {
  if (k.isotropic()) return M / k.lengthscale[0];
  k.check_dimension(M.cols());
  return M * k.lengthscale.cwiseInverse().asDiagonal();
}

}  // namespace

KernelSpec KernelSpec::squared_exponential(Eigen::VectorXd lengthscale, double output_scale) {
  KernelSpec k{KernelFamily::SquaredExponential, std::move(lengthscale), output_scale};
  k.validate();
  return k;
}

KernelSpec KernelSpec::matern52(Eigen::VectorXd lengthscale, double output_scale) {
  KernelSpec k{KernelFamily::Matern52, std::move(lengthscale), output_scale};
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (lengthscale.size() == 0) throw InputError("kernel.lengthscale: must not be empty");
  if (!(lengthscale.array() > 0.0).all() || !lengthscale.allFinite()) {
    throw InputError("kernel.lengthscale: entries must be finite and > 0");
  }
  if (!(output_scale > 0.0) || !std::isfinite(output_scale)) {
    throw InputError("kernel.output_scale: must be finite and > 0");
  }
}

void KernelSpec::check_dimension(Eigen::Index d) const {
  if (!isotropic() && lengthscale.size() != d) {
    throw InputError("kernel: lengthscale has " + std::to_string(lengthscale.size()) +
                     " entries, inputs have dimension " + std::to_string(d));
  }
}

KernelSpec KernelSpec::head(Eigen::Index count) const {
  if (isotropic()) return *this;
  if (count > lengthscale.size()) throw InputError("kernel: head() beyond lengthscale size");
  return KernelSpec{family, lengthscale.head(count), output_scale};
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential: return "se";
    case KernelFamily::Matern52: return "matern52";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "se" || name == "squared_exponential") return KernelFamily::SquaredExponential;
  if (name == "matern52") return KernelFamily::Matern52;
  throw InputError("kernel.family: unknown family '" + name + "' (expected se or matern52)");
}

double radial_profile(KernelFamily family, double u) {
  switch (family) {
    case KernelFamily::SquaredExponential: return std::exp(-0.5 * u * u);
    case KernelFamily::Matern52: {
      const double v = kSqrt5 * u;
      return (1.0 + v + v * v / 3.0) * std::exp(-v);
    }
  }
  return 0.0;
}

double radial_profile_second_derivative(KernelFamily family, double u) {
  switch (family) {
    case KernelFamily::SquaredExponential: return (u * u - 1.0) * std::exp(-0.5 * u * u);
    case KernelFamily::Matern52: {
      // d^2/dv^2 of (1 + v + v^2/3) e^{-v} is (v^2 - v - 1) e^{-v} / 3, and v = sqrt(5) u.
      const double v = kSqrt5 * u;
      return 5.0 * (v * v - v - 1.0) * std::exp(-v) / 3.0;
    }
  }
  return 0.0;
}

Eigen::MatrixXd gram(const KernelSpec& k, const Eigen::MatrixXd& Z) {
  const Eigen::Index n = Z.rows();
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    G(i, i) = eval(k, Z.row(i), Z.row(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      G(i, j) = eval(k, Z.row(i), Z.row(j));
      G(j, i) = G(i, j);
    }
  }
  return G;
}

Eigen::MatrixXd cross_gram(const KernelSpec& k, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() == 0 || B.rows() == 0) return Eigen::MatrixXd(A.rows(), B.rows());
  if (A.cols() != B.cols()) {
    throw InputError("kernel: point dimensions differ (" + std::to_string(A.cols()) + " vs " +
                     std::to_string(B.cols()) + ")");
  }
  const Eigen::MatrixXd As = scale_rows(k, A);
  const Eigen::MatrixXd Bs = scale_rows(k, B);
  Eigen::MatrixXd sq = (-2.0 * As * Bs.transpose()).eval();
  sq.colwise() += As.rowwise().squaredNorm();
  sq.rowwise() += Bs.rowwise().squaredNorm().transpose();
  sq = sq.cwiseMax(0.0);
  switch (k.family) {
    case KernelFamily::SquaredExponential:
      return k.output_scale * (-0.5 * sq.array()).exp().matrix();
    case KernelFamily::Matern52: {
      const Eigen::ArrayXXd v = kSqrt5 * sq.array().sqrt();
      return k.output_scale * ((1.0 + v + v.square() / 3.0) * (-v).exp()).matrix();
    }
  }
  return {};
}

double lipschitz_constant(const KernelSpec& k, double diameter) {
  k.validate();
  const double min_length = k.lengthscale.minCoeff();
  if (k.family == KernelFamily::SquaredExponential) return std::sqrt(k.output_scale) / min_length;

  constexpr int kGrid = 10000;
  const double u_max = std::max(diameter, 0.0) / min_length;
  double worst = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double u = u_max * i / (kGrid - 1);
    worst = std::max(worst, -radial_profile_second_derivative(k.family, u));
  }
  return std::sqrt(k.output_scale * worst) / min_length;
}

}  // namespace wdrbo
