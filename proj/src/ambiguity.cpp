#include "wdrbo/ambiguity.hpp"

#include <algorithm>
#include <cmath>

#include "wdrbo/errors.hpp"

namespace wdrbo {

RadiusSchedule RadiusSchedule::constant(double eps) {
  if (!(eps >= 0.0)) throw InputError("radius.constant: must be >= 0");
  return {Kind::Constant, eps, {}};
}

RadiusSchedule RadiusSchedule::inverse_sqrt(double eps0) {
  if (!(eps0 >= 0.0)) throw InputError("radius.inv_sqrt: must be >= 0");
  return {Kind::InverseSqrt, eps0, {}};
}

RadiusSchedule RadiusSchedule::explicit_table(std::vector<double> radii) {
  for (double r : radii) {
    if (!(r >= 0.0)) throw InputError("radius.explicit: all radii must be >= 0");
  }
  return {Kind::Explicit, 0.0, std::move(radii)};
}

double RadiusSchedule::at(int t) const {
  if (t < 1) throw InputError("radius: step index must be >= 1");
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::InverseSqrt: return value / std::sqrt(static_cast<double>(t));
    case Kind::Explicit:
      if (static_cast<std::size_t>(t) > table.size()) {
        throw InputError("radius: explicit schedule has " + std::to_string(table.size()) +
                         " entries, step " + std::to_string(t) + " requested");
      }
      return table[static_cast<std::size_t>(t - 1)];
  }
  return 0.0;
}

const Eigen::MatrixXd& CenterDistribution::atoms() const {
  if (!enumerable()) throw InputError("center: parametric center has no atoms");
  return atoms_;
}

const ContextDistribution& CenterDistribution::sampler() const {
  if (enumerable()) throw InputError("center: empirical center has no sampler");
  return *sampler_;
}

Eigen::MatrixXd CenterDistribution::samples(Rng& rng, Eigen::Index n) const {
  return enumerable() ? atoms_ : sampler_->sample(rng, n);
}

AmbiguityModel::AmbiguityModel(Center center, RadiusSchedule radius, Box context_bounds)
    : center_(std::move(center)), radius_(std::move(radius)), bounds_(std::move(context_bounds)),
      history_(0, bounds_.dim()) {
  if (const auto* p = std::get_if<ParametricCenter>(&center_); p && p->distribution.dim() != bounds_.dim()) {
    throw InputError("ambiguity.center: distribution dimension does not match the context box");
  }
}

void AmbiguityModel::record_context(const Eigen::VectorXd& c) {
  if (c.size() != bounds_.dim()) throw InputError("ambiguity: context dimension mismatch");
  history_.conservativeResize(history_.rows() + 1, Eigen::NoChange);
  history_.row(history_.rows() - 1) = c.transpose();
}

CenterDistribution AmbiguityModel::center_at(int t) const {
  if (t < 1) throw InputError("ambiguity: step index must be >= 1");
  if (const auto* p = std::get_if<ParametricCenter>(&center_)) return CenterDistribution(p->distribution);
  const Eigen::Index seen = std::min<Eigen::Index>(t - 1, history_.rows());
  if (seen == 0) return CenterDistribution(Eigen::MatrixXd(bounds_.midpoint().transpose()));
  return CenterDistribution(Eigen::MatrixXd(history_.topRows(seen)));
}

double robust_gap_bound(double epsilon, double lipschitz) {
  if (!(epsilon >= 0.0) || !(lipschitz >= 0.0)) {
    throw InputError("robust_gap_bound: epsilon and lipschitz must be >= 0");
  }
  return epsilon * lipschitz;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw InputError("wasserstein_1d: need equal, nonzero sample counts (got " + std::to_string(a.size()) +
                     " and " + std::to_string(b.size()) + ")");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
  return total / static_cast<double>(sa.size());
}

double data_driven_correction(int t, double kernel_lipschitz, double mean_norm_bound) {
  if (t < 1) throw InputError("data_driven_correction: step index must be >= 1");
  return (1.0 + 2.0 * kernel_lipschitz * mean_norm_bound) / static_cast<double>(t);
}

}  // namespace wdrbo
