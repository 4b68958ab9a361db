#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wdrbo/distribution.hpp"

namespace wdrbo {

using ContextObjective = std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& c)>;

/// A black-box objective f(x, c) to be maximized, with the distribution the
/// contexts are actually drawn from and the observation noise level.
struct Environment {
  std::string name;
  Box x_bounds;
  Box c_bounds;  // kernel normalization and Lipschitz grid; contexts may fall outside when unclipped
  ContextObjective objective;
  ContextDistribution true_context;
  double noise_std = 0.01;
  std::optional<ContextDistribution> nominal_center;  // ambiguity center suggested by the setting

  Eigen::Index dx() const { return x_bounds.dim(); }
  Eigen::Index dc() const { return c_bounds.dim(); }
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& c) const { return objective(x, c); }
};

/// Noisy evaluation y = f(x, c) + noise_std * N(0, 1). Always consumes one draw.
double observe(const Environment& env, const Eigen::VectorXd& x, const Eigen::VectorXd& c, Rng& rng);

// Raw benchmark formulas, in their conventional orientation.
double general_setting_objective(double x, double c);
double three_humps_camel(double x, double c);
double ackley(const Eigen::VectorXd& z);
double branin(double u, double v);
double hartmann3(const Eigen::Vector3d& z);

/// f(x, c) = 1 - |c - 0.5| / (|x| + 0.2) - sqrt(|x| + 0.05) on x in [-1, 1];
/// true contexts N(0.6, 0.2) unclipped, nominal center N(0.5, 0.1).
Environment general_setting_env();
/// Negated three-hump camel on x, c in [-1, 1] with uniform contexts.
Environment three_humps_env();
/// Negated 2-D Ackley with the context as its second input, x in [-1, 1].
Environment ackley_env();
/// Negated Branin with the contexts shifting both inputs, neutral at c = (0.5, 0.5).
Environment branin_env();
/// Negated Hartmann-3 with the context as the third input.
Environment hartmann_env();
std::vector<Environment> synthetic_suite();

/// Environment by name: general, three_humps, ackley, branin, hartmann.
Environment make_environment(const std::string& name);
std::vector<std::string> environment_names();

}  // namespace wdrbo
