#include "wdrbo/optimizer.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "wdrbo/errors.hpp"

namespace wdrbo {

void MultiStartConfig::validate() const {
  if (n_starts < 1) throw InputError("optimizer.starts: must be >= 1");
  if (n_grid_per_dim < 0) throw InputError("optimizer.grid: must be >= 0");
  if (n_random < 0) throw InputError("optimizer.random: must be >= 0");
  if (!(local_search.shrink > 0.0 && local_search.shrink < 1.0)) {
    throw InputError("optimizer.shrink: must lie in (0, 1)");
  }
  if (local_search.max_iterations < 0) throw InputError("optimizer.max_iterations: must be >= 0");
}

int MultiStartConfig::grid_for(Eigen::Index dim) const {
  if (n_grid_per_dim > 0) return n_grid_per_dim;
  if (dim <= 2) return 25;
  if (dim == 3) return 7;
  return 4;
}

Eigen::MatrixXd tensor_grid(const Box& box, int per_dim) {
  const Eigen::Index d = box.dim();
  Eigen::Index total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= per_dim;
  Eigen::MatrixXd grid(total, d);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (Eigen::Index r = 0; r < total; ++r) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double frac = per_dim == 1 ? 0.5 : double(idx[std::size_t(j)]) / double(per_dim - 1);
      grid(r, j) = box.lo(j) + frac * (box.hi(j) - box.lo(j));
    }
    // last coordinate varies fastest
    for (Eigen::Index j = d - 1; j >= 0; --j) {
      if (++idx[std::size_t(j)] < per_dim) break;
      idx[std::size_t(j)] = 0;
    }
  }
  return grid;
}

Maximum pattern_search(const Objective& f, const Box& box, Eigen::VectorXd start, double start_value,
                       const PatternSearch& settings, double initial_step_fraction) {
  const Eigen::VectorXd width = box.width();
  Eigen::VectorXd step = initial_step_fraction * width;
  Maximum best{std::move(start), start_value};
  for (int it = 0; it < settings.max_iterations; ++it) {
    bool improved = false;
    for (Eigen::Index j = 0; j < box.dim() && !improved; ++j) {
      if (width(j) == 0.0) continue;
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd candidate = best.x;
        candidate(j) = std::clamp(candidate(j) + sign * step(j), box.lo(j), box.hi(j));
        if (candidate(j) == best.x(j)) continue;
        const double value = f(candidate);
        if (value > best.value) {
          best = {std::move(candidate), value};
          improved = true;
          break;
        }
      }
    }
    if (improved) continue;
    step *= settings.shrink;
    if ((step.array() <= settings.tolerance * width.array()).all()) break;
  }
  return best;
}

Maximum maximize_on_box(const Objective& f, const Box& box, const MultiStartConfig& config) {
  config.validate();
  const int per_dim = config.grid_for(box.dim());
  const Eigen::MatrixXd grid = tensor_grid(box, per_dim);
  std::vector<double> values(static_cast<std::size_t>(grid.rows()));
  for (Eigen::Index r = 0; r < grid.rows(); ++r) values[std::size_t(r)] = f(grid.row(r).transpose());

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  std::vector<Maximum> starts;
  const std::size_t n_grid_starts = std::min<std::size_t>(std::size_t(config.n_starts), order.size());
  for (std::size_t i = 0; i < n_grid_starts; ++i) {
    starts.push_back({grid.row(Eigen::Index(order[i])).transpose(), values[order[i]]});
  }
  if (config.n_random > 0) {
    Rng rng(config.rng_seed);
    for (int i = 0; i < config.n_random; ++i) {
      Eigen::VectorXd x(box.dim());
      for (Eigen::Index j = 0; j < box.dim(); ++j) {
        x(j) = std::uniform_real_distribution<double>(box.lo(j), box.hi(j))(rng);
      }
      const double v = f(x);
      starts.push_back({std::move(x), v});
    }
  }

  const double step_fraction = per_dim > 1 ? 0.5 / double(per_dim - 1) : 0.25;
  Maximum best = starts.front();
  for (const Maximum& s : starts) {
    Maximum polished = pattern_search(f, box, s.x, s.value, config.local_search, step_fraction);
    if (polished.value > best.value) best = std::move(polished);
  }
  return best;
}

}  // namespace wdrbo
