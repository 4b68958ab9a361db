#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wdrbo/config.hpp"
#include "wdrbo/regret.hpp"

namespace wdrbo {

/// Independent random streams derived from one run seed.
enum class Stream : std::uint64_t { Contexts = 1, Noise = 2, Center = 3, Panel = 4, Optimizer = 5 };

/// SplitMix64 mix of (seed, stream, index).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

/// State shared by every algorithm at one seed: the evaluation panel, its
/// oracle and the realized context sequence c_1 .. c_T.
struct SeedContext {
  std::uint64_t seed = 0;
  EvaluationPanel panel;
  Oracle oracle;
  Eigen::MatrixXd contexts;
};

SeedContext prepare_seed(const ExperimentConfig& config, const Environment& env, std::uint64_t seed);

/// One optimization loop: fit, maximize the acquisition, observe, append.
/// Numerical failures end the trace early and set `failure`.
RegretTrace run_single(const ExperimentConfig& config, const Environment& env, Algorithm algorithm,
                       const SeedContext& shared);

/// Every configured algorithm at every seed, seeds sharing contexts and panels.
/// Traces are ordered by algorithm, then seed.
std::vector<RegretTrace> run(const ExperimentConfig& config);

struct SeriesSummary {
  std::string algorithm;
  int n_seeds = 0;
  std::vector<double> mean;    // mean R_t over seeds
  std::vector<double> std_error;  // sample std / sqrt(n_seeds)
  double wall_ms_mean = 0.0;   // total fit + acquisition time per seed
  double wall_ms_stderr = 0.0;
};

struct RunSummary {
  std::vector<SeriesSummary> series;  // in first-appearance order of the algorithms

  const SeriesSummary& at(const std::string& algorithm) const;
};

/// Mean and standard error of a sample; the error is 0 for one value.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);

/// Pointwise statistics of cumulative regret per algorithm. Failed traces are
/// skipped; unequal horizons within an algorithm raise InputError.
RunSummary aggregate(const std::vector<RegretTrace>& traces);

}  // namespace wdrbo
