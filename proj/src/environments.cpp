#include "wdrbo/environments.hpp"

#include <cmath>
#include <numbers>

#include "wdrbo/errors.hpp"

namespace wdrbo {

namespace {

using std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ContextDistribution clipped_unit_normal(Eigen::Index dc) {
  return ContextDistribution::normal(Eigen::VectorXd::Constant(dc, 0.5), Eigen::VectorXd::Constant(dc, 0.2),
                                     Box::cube(dc, 0.0, 1.0));
}

}  // namespace

double observe(const Environment& env, const Eigen::VectorXd& x, const Eigen::VectorXd& c, Rng& rng) {
  if (!env.x_bounds.contains(x, 1e-9)) throw InputError("observe: decision outside the box of " + env.name);
  if (c.size() != env.dc()) throw InputError("observe: context dimension mismatch for " + env.name);
  const double noise = std::normal_distribution<double>(0.0, 1.0)(rng);
  return env.objective(x, c) + env.noise_std * noise;
}

double general_setting_objective(double x, double c) {
  const double a = std::abs(x);
  return 1.0 - std::abs(c - 0.5) / (a + 0.2) - std::sqrt(a + 0.05);
}

double three_humps_camel(double x, double c) {
  const double x2 = x * x;
  return 2.0 * x2 - 1.05 * x2 * x2 + x2 * x2 * x2 / 6.0 + x * c + c * c;
}

double ackley(const Eigen::VectorXd& z) {
  const double n = static_cast<double>(z.size());
  const double radial = std::sqrt(z.squaredNorm() / n);
  const double wave = (2.0 * pi * z.array()).cos().sum() / n;
  return -20.0 * std::exp(-0.2 * radial) - std::exp(wave) + std::numbers::e + 20.0;
}

double branin(double u, double v) {
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double q = v - b * u * u + c * u - 6.0;
  return q * q + 10.0 * (1.0 - t) * std::cos(u) + 10.0;
}

double hartmann3(const Eigen::Vector3d& z) {
  static const Eigen::Vector4d alpha(1.0, 1.2, 3.0, 3.2);
  static const Eigen::Matrix<double, 4, 3> A =
      (Eigen::Matrix<double, 4, 3>() << 3.0, 10, 30, 0.1, 10, 35, 3.0, 10, 30, 0.1, 10, 35).finished();
  static const Eigen::Matrix<double, 4, 3> P =
      (Eigen::Matrix<double, 4, 3>() << 3689, 1170, 2673, 4699, 4387, 7470, 1091, 8732, 5547, 381, 5743, 8828)
          .finished() *
      1e-4;
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double inner = (A.row(i).array() * (z.transpose().array() - P.row(i).array()).square()).sum();
    total += alpha(i) * std::exp(-inner);
  }
  return -total;
}

Environment general_setting_env() {
  Environment env;
  env.name = "general";
  env.x_bounds = Box::cube(1, -1.0, 1.0);
  env.c_bounds = Box::cube(1, -0.2, 1.4);
  env.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) {
    return general_setting_objective(x(0), c(0));
  };
  env.true_context = ContextDistribution::normal(vec({0.6}), vec({0.2}));
  env.nominal_center = ContextDistribution::normal(vec({0.5}), vec({0.1}));
  return env;
}

Environment three_humps_env() {
  Environment env;
  env.name = "three_humps";
  env.x_bounds = Box::cube(1, -1.0, 1.0);
  env.c_bounds = Box::cube(1, -1.0, 1.0);
  env.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) { return -three_humps_camel(x(0), c(0)); };
  env.true_context = ContextDistribution::uniform(vec({-1.0}), vec({1.0}));
  return env;
}

Environment ackley_env() {
  Environment env;
  env.name = "ackley";
  env.x_bounds = Box::cube(1, -1.0, 1.0);
  env.c_bounds = Box::cube(1, 0.0, 1.0);
  env.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) {
    return -ackley(Eigen::Vector2d(x(0), c(0)));
  };
  env.true_context = clipped_unit_normal(1);
  return env;
}

Environment branin_env() {
  Environment env;
  env.name = "branin";
  env.x_bounds = Box(vec({-5.0, 0.0}), vec({10.0, 15.0}));
  env.c_bounds = Box::cube(2, 0.0, 1.0);
  env.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) {
    return -branin(x(0) + 5.0 * (c(0) - 0.5), x(1) + 5.0 * (c(1) - 0.5));
  };
  env.true_context = clipped_unit_normal(2);
  return env;
}

Environment hartmann_env() {
  Environment env;
  env.name = "hartmann";
  env.x_bounds = Box::cube(2, 0.0, 1.0);
  env.c_bounds = Box::cube(1, 0.0, 1.0);
  env.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) {
    return -hartmann3(Eigen::Vector3d(x(0), x(1), c(0)));
  };
  env.true_context = clipped_unit_normal(1);
  return env;
}

std::vector<Environment> synthetic_suite() { return {ackley_env(), branin_env(), hartmann_env()}; }

Environment make_environment(const std::string& name) {
  if (name == "general") return general_setting_env();
  if (name == "three_humps") return three_humps_env();
  if (name == "ackley") return ackley_env();
  if (name == "branin") return branin_env();
  if (name == "hartmann") return hartmann_env();
  throw InputError("env: unknown environment '" + name + "'");
}

std::vector<std::string> environment_names() { return {"general", "three_humps", "ackley", "branin", "hartmann"}; }

}  // namespace wdrbo
