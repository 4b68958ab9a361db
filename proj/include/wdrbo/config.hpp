#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wdrbo/acquisition.hpp"
#include "wdrbo/ambiguity.hpp"
#include "wdrbo/environments.hpp"
#include "wdrbo/kernel.hpp"
#include "wdrbo/surrogate.hpp"

namespace wdrbo {

enum class Algorithm { WDRBO, ERBO, GPUCB, StableOpt };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);

/// Ambiguity center as configured. Nominal defers to the environment's own
/// suggested center and falls back to Empirical when it has none.
struct CenterChoice {
  enum class Kind { Nominal, Empirical, Normal, Uniform };
  Kind kind = Kind::Nominal;
  Eigen::VectorXd a;  // mean or lower bound, broadcast to d_c when scalar
  Eigen::VectorXd b;  // std or upper bound
};

struct ExperimentConfig {
  std::string env = "general";
  std::optional<double> noise_std;
  std::vector<Algorithm> algorithms{Algorithm::WDRBO};

  KernelFamily kernel_family = KernelFamily::SquaredExponential;
  Eigen::VectorXd lengthscale = Eigen::VectorXd::Constant(1, 0.2);  // per normalized input dimension
  SurrogateOptions surrogate{};

  CenterChoice center{};
  RadiusSchedule radius = RadiusSchedule::inverse_sqrt(1.0);
  int center_mc_samples = 64;

  LipschitzMode lipschitz = LipschitzMode::numeric(32);
  MultiStartConfig optimizer{};
  int stableopt_grid = 16;

  int horizon = 100;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output = "out";

  int oracle_grid = 0;
  Eigen::Index oracle_mc_samples = 20000;

  bool record_timing = false;
  int threads = 1;

  /// Resolved defaults: seeds 0..14 when none are given.
  ExperimentConfig();
  void validate() const;
};

/// Strict parse: unknown keys and type errors raise InputError naming the field path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// JSON text of the fully resolved configuration.
std::string dump_config(const ExperimentConfig& config, int indent = 2);

/// Kernel in raw coordinates: normalized lengthscales times the box widths of X x C.
KernelSpec resolve_kernel(const ExperimentConfig& config, const Environment& env);
/// Ambiguity model for an environment, resolving the Nominal center.
AmbiguityModel resolve_ambiguity(const ExperimentConfig& config, const Environment& env);
Environment resolve_environment(const ExperimentConfig& config);

}  // namespace wdrbo
