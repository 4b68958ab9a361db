#include "wdrbo/distribution.hpp"

#include <sstream>

#include "wdrbo/errors.hpp"

namespace wdrbo {

Box::Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) throw InputError("box: lo and hi differ in dimension");
  if (lo.size() == 0) throw InputError("box: must have at least one dimension");
  if (!(hi.array() >= lo.array()).all() || !lo.allFinite() || !hi.allFinite()) {
    throw InputError("box: need finite lo <= hi in every dimension");
  }
}

Box Box::cube(Eigen::Index dim, double lo, double hi) {
  return Box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

bool Box::contains(const Eigen::VectorXd& p, double tol) const {
  if (p.size() != dim()) return false;
  return ((p.array() >= lo.array() - tol) && (p.array() <= hi.array() + tol)).all();
}

Eigen::VectorXd Box::clamp(const Eigen::VectorXd& p) const { return p.cwiseMax(lo).cwiseMin(hi); }

ContextDistribution ContextDistribution::normal(Eigen::VectorXd mean, Eigen::VectorXd std,
                                                std::optional<Box> clip) {
  if (mean.size() != std.size() || mean.size() == 0) {
    throw InputError("normal context: mean and std must be nonempty and equal length");
  }
  if (!(std.array() >= 0.0).all()) throw InputError("normal context: std must be >= 0");
  if (clip && clip->dim() != mean.size()) throw InputError("normal context: clip box dimension mismatch");
  return {Kind::Normal, std::move(mean), std::move(std), std::move(clip)};
}

ContextDistribution ContextDistribution::uniform(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  Box check(lo, hi);
  return {Kind::Uniform, std::move(lo), std::move(hi), std::nullopt};
}

Eigen::VectorXd ContextDistribution::sample(Rng& rng) const {
  Eigen::VectorXd c(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (kind == Kind::Normal) {
      std::normal_distribution<double> draw(0.0, 1.0);
      c(i) = a(i) + b(i) * draw(rng);
    } else {
      std::uniform_real_distribution<double> draw(a(i), b(i));
      c(i) = draw(rng);
    }
  }
  if (clip) c = clip->clamp(c);
  return c;
}

Eigen::MatrixXd ContextDistribution::sample(Rng& rng, Eigen::Index n) const {
  Eigen::MatrixXd out(n, dim());
  for (Eigen::Index r = 0; r < n; ++r) out.row(r) = sample(rng).transpose();
  return out;
}

std::optional<Box> ContextDistribution::support() const {
  if (kind == Kind::Uniform) return Box(a, b);
  if (clip) return clip;
  if ((b.array() == 0.0).all()) return Box(a, a);
  return std::nullopt;
}

std::string ContextDistribution::describe() const {
  std::ostringstream out;
  out << (kind == Kind::Normal ? "normal(" : "uniform(");
  for (Eigen::Index i = 0; i < dim(); ++i) out << (i ? "; " : "") << a(i) << ", " << b(i);
  out << ")";
  if (clip) out << " clipped";
  return out.str();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> column_moments(const Eigen::MatrixXd& samples) {
  const Eigen::VectorXd mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  const Eigen::VectorXd std = (centered.colwise().squaredNorm().transpose() / double(samples.rows())).cwiseSqrt();
  return {mean, std};
}

}  // namespace wdrbo
