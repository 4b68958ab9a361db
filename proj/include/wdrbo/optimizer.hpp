#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "wdrbo/distribution.hpp"

namespace wdrbo {

/// Compass (coordinate pattern) search settings.
struct PatternSearch {
  int max_iterations = 200;
  double shrink = 0.5;
  double tolerance = 1e-7;  // stop once every step is below tolerance * box width
};

/// Multi-start maximizer: evaluate a coarse grid, keep the best n_starts grid
/// points (ties to the lowest index) plus n_random uniform draws, and polish
/// each with pattern search.
struct MultiStartConfig {
  int n_starts = 8;
  int n_grid_per_dim = 0;  // 0 selects 25 for d <= 2, 7 for d = 3, 4 above
  int n_random = 0;
  PatternSearch local_search{};
  std::uint64_t rng_seed = 0;

  void validate() const;
  int grid_for(Eigen::Index dim) const;
};

struct Maximum {
  Eigen::VectorXd x;
  double value = 0.0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Full tensor grid with `per_dim` points per axis, one point per row.
Eigen::MatrixXd tensor_grid(const Box& box, int per_dim);

/// Polishes `start` by compass search; never returns a worse point.
Maximum pattern_search(const Objective& f, const Box& box, Eigen::VectorXd start, double start_value,
                       const PatternSearch& settings, double initial_step_fraction);

Maximum maximize_on_box(const Objective& f, const Box& box, const MultiStartConfig& config);

}  // namespace wdrbo
