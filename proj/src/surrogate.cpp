#include "wdrbo/surrogate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace wdrbo {

namespace {

constexpr double kVarianceClamp = -1e-10;

// Attempts LL^T = A + jitter I with escalating jitter. Returns false when the
// largest allowed jitter still fails.
bool cholesky_with_jitter(const Eigen::MatrixXd& A, Eigen::MatrixXd& L, double& jitter) {
  const Eigen::Index n = A.rows();
  const double trace = A.trace();
  const double first = 1e-10 * trace;
  const double last = 1e-4 * trace;
  jitter = 0.0;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(A + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) {
      L = llt.matrixL();
      return true;
    }
    if (jitter == 0.0) {
      jitter = first;
    } else if (jitter * 10.0 <= last * (1.0 + 1e-12)) {
      jitter *= 10.0;
    } else {
      return false;
    }
  }
}

}  // namespace

void SurrogateOptions::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("surrogate.lambda: must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("surrogate.delta: must lie in (0, 1)");
  if (noise_bound < 0.0) throw InputError("surrogate.noise_bound: must be >= 0");
  if (norm_bound < 0.0) throw InputError("surrogate.norm_bound: must be >= 0");
  if (beta.kind == BetaMode::Kind::Fixed && !(beta.value >= 0.0)) {
    throw InputError("surrogate.beta: fixed value must be >= 0");
  }
}

Surrogate::Surrogate(KernelSpec kernel, Eigen::Index dim, SurrogateOptions options)
    : kernel_(std::move(kernel)), dim_(dim), options_(options), Z_(0, dim), y_(0), chol_(0, 0), alpha_(0) {
  kernel_.validate();
  kernel_.check_dimension(dim);
  options_.validate();
}

Surrogate Surrogate::fit(KernelSpec kernel, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                         SurrogateOptions options) {
  if (Z.rows() != y.size()) {
    throw InputError("surrogate.fit: " + std::to_string(Z.rows()) + " inputs but " +
                     std::to_string(y.size()) + " targets");
  }
  if (!y.allFinite()) throw InputError("surrogate.fit: targets must be finite");
  if (!Z.allFinite()) throw InputError("surrogate.fit: inputs must be finite");
  Surrogate model(std::move(kernel), Z.cols(), options);
  model.Z_ = Z;
  model.y_ = y;
  model.factorize();
  model.solve_alpha();
  return model;
}

void Surrogate::factorize() {
  const Eigen::Index n = Z_.rows();
  if (n == 0) {
    chol_.resize(0, 0);
    jitter_ = 0.0;
    return;
  }
  Eigen::MatrixXd A = gram(kernel_, Z_);
  A.diagonal().array() += options_.lambda;
  if (!cholesky_with_jitter(A, chol_, jitter_)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "surrogate: Cholesky of K + lambda I failed after jitter escalation (n = " << n
        << ", condition estimate " << eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff() << ")";
    throw NumericalError(msg.str());
  }
}

void Surrogate::solve_alpha() {
  if (Z_.rows() == 0) {
    alpha_.resize(0);
    return;
  }
  alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_);
  chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

Surrogate Surrogate::update(const Eigen::VectorXd& z, double y) const {
  if (z.size() != dim_) {
    throw InputError("surrogate.update: point has dimension " + std::to_string(z.size()) +
                     ", model expects " + std::to_string(dim_));
  }
  if (!std::isfinite(y)) throw InputError("surrogate.update: target must be finite");
  if (!z.allFinite()) throw InputError("surrogate.update: point must be finite");

  Surrogate next = *this;
  const Eigen::Index n = Z_.rows();
  next.Z_.conservativeResize(n + 1, Eigen::NoChange);
  next.Z_.row(n) = z.transpose();
  next.y_.conservativeResize(n + 1);
  next.y_(n) = y;

  const double diag = eval(kernel_, z, z) + options_.lambda + jitter_;
  Eigen::VectorXd row;
  double pivot = diag;
  if (n > 0) {
    const Eigen::VectorXd kz = cross_gram(kernel_, Z_, z.transpose()).col(0);
    row = chol_.triangularView<Eigen::Lower>().solve(kz);
    pivot = diag - row.squaredNorm();
  }
  if (!(pivot > 0.0) || !std::isfinite(pivot)) {
    next.factorize();
  } else {
    next.chol_.conservativeResize(n + 1, n + 1);
    next.chol_.col(n).setZero();
    if (n > 0) next.chol_.row(n).head(n) = row.transpose();
    next.chol_(n, n) = std::sqrt(pivot);
  }
  next.solve_alpha();
  return next;
}

double Surrogate::posterior_variance_from(double prior, double reduction) const {
  const double radicand = prior - reduction;
  if (radicand < kVarianceClamp) {
    throw NumericalError("surrogate: posterior variance radicand " + std::to_string(radicand) +
                         " below clamp threshold");
  }
  return radicand > 0.0 ? radicand / options_.lambda : 0.0;
}

double Surrogate::posterior_mean(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) throw InputError("surrogate: query dimension mismatch");
  if (empty()) return 0.0;
  return cross_gram(kernel_, z.transpose(), Z_).row(0).dot(alpha_);
}

double Surrogate::posterior_std(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) throw InputError("surrogate: query dimension mismatch");
  const double prior = eval(kernel_, z, z);
  if (empty()) return std::sqrt(posterior_variance_from(prior, 0.0));
  const Eigen::VectorXd kz = cross_gram(kernel_, Z_, z.transpose()).col(0);
  const Eigen::VectorXd w = chol_.triangularView<Eigen::Lower>().solve(kz);
  return std::sqrt(posterior_variance_from(prior, w.squaredNorm()));
}

Prediction Surrogate::predict(const Eigen::MatrixXd& Zq) const {
  if (Zq.cols() != dim_) throw InputError("surrogate: query dimension mismatch");
  const Eigen::Index m = Zq.rows();
  Prediction out{Eigen::VectorXd::Zero(m), Eigen::VectorXd(m)};
  const double prior = kernel_.output_scale;  // stationary: k(z, z) = s
  if (empty()) {
    out.std.setConstant(std::sqrt(posterior_variance_from(prior, 0.0)));
    return out;
  }
  const Eigen::MatrixXd Kt = cross_gram(kernel_, Z_, Zq);  // t x m
  out.mean.noalias() = Kt.transpose() * alpha_;
  const Eigen::MatrixXd W = chol_.triangularView<Eigen::Lower>().solve(Kt);
  const Eigen::VectorXd reduction = W.colwise().squaredNorm().transpose();
  for (Eigen::Index i = 0; i < m; ++i) out.std(i) = std::sqrt(posterior_variance_from(prior, reduction(i)));
  return out;
}

double Surrogate::ucb(const Eigen::VectorXd& z, double beta) const {
  return posterior_mean(z) + beta * posterior_std(z);
}

double Surrogate::lcb(const Eigen::VectorXd& z, double beta) const {
  return posterior_mean(z) - beta * posterior_std(z);
}

double Surrogate::information_gain() const {
  if (empty()) return 0.0;
  // det(K + lambda I) = prod diag(L)^2, det(I + K / lambda) = det(K + lambda I) / lambda^t.
  const double logdet = 2.0 * chol_.diagonal().array().log().sum();
  return logdet - static_cast<double>(size()) * std::log(options_.lambda);
}

double Surrogate::theoretical_beta() const {
  const double confidence = 0.5 * information_gain() - std::log(options_.delta);
  return options_.noise_bound * std::sqrt(2.0 * confidence) + std::sqrt(options_.lambda) * options_.norm_bound;
}

double Surrogate::beta() const {
  return options_.beta.kind == BetaMode::Kind::Fixed ? options_.beta.value : theoretical_beta();
}

double Surrogate::mean_norm_bound() const {
  const double confidence = 0.5 * information_gain() - std::log(options_.delta);
  return options_.noise_bound * std::sqrt(2.0 * confidence) / std::sqrt(options_.lambda) + options_.norm_bound;
}

double Surrogate::mean_rkhs_norm() const {
  if (empty()) return 0.0;
  const double sq = alpha_.dot(gram(kernel_, Z_) * alpha_);
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace wdrbo
