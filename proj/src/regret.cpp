#include "wdrbo/regret.hpp"

#include <algorithm>

#include "wdrbo/errors.hpp"
#include "wdrbo/optimizer.hpp"

namespace wdrbo {

EvaluationPanel EvaluationPanel::draw(const Environment& env, Eigen::Index mc_samples, std::uint64_t seed) {
  if (mc_samples < 1) throw InputError("oracle.mc_samples: must be >= 1");
  Rng rng(seed);
  return {env.true_context.sample(rng, mc_samples)};
}

double EvaluationPanel::expected_value(const Environment& env, const Eigen::VectorXd& x) const {
  double total = 0.0;
  Eigen::VectorXd c(contexts.cols());
  for (Eigen::Index i = 0; i < contexts.rows(); ++i) {
    c = contexts.row(i).transpose();
    total += env.objective(x, c);
  }
  return total / static_cast<double>(contexts.rows());
}

int default_oracle_grid(Eigen::Index dx) {
  if (dx == 1) return 2001;
  if (dx == 2) return 201;
  return 41;
}

Oracle oracle_best(const Environment& env, const EvaluationPanel& panel, int grid_per_dim) {
  const int per_dim = grid_per_dim > 0 ? grid_per_dim : default_oracle_grid(env.dx());
  const Eigen::MatrixXd grid = tensor_grid(env.x_bounds, per_dim);
  Oracle best{grid.row(0).transpose(), panel.expected_value(env, grid.row(0).transpose())};
  for (Eigen::Index r = 1; r < grid.rows(); ++r) {
    const double v = panel.expected_value(env, grid.row(r).transpose());
    if (v > best.value) best = {grid.row(r).transpose(), v};
  }
  const PatternSearch refine{100, 0.5, 1e-9};
  const double step = per_dim > 1 ? 1.0 / double(per_dim - 1) : 0.25;
  const Maximum polished = pattern_search([&](const Eigen::VectorXd& x) { return panel.expected_value(env, x); },
                                          env.x_bounds, best.x, best.value, refine, step);
  return {polished.x, polished.value};
}

RegretValue instantaneous_regret(const Environment& env, const Oracle& oracle, const EvaluationPanel& panel,
                                 const Eigen::VectorXd& x) {
  const double raw = oracle.value - panel.expected_value(env, x);
  return {std::max(raw, 0.0), raw};
}

void RegretTrace::push(StepRecord step) {
  step.r_cum = (steps.empty() ? 0.0 : steps.back().r_cum) + step.r_inst;
  steps.push_back(std::move(step));
}

std::vector<double> cumulative(std::span<const double> instantaneous) {
  std::vector<double> out(instantaneous.size());
  double running = 0.0;
  for (std::size_t i = 0; i < instantaneous.size(); ++i) {
    running += instantaneous[i];
    out[i] = running;
  }
  return out;
}

std::vector<double> cumulative(const RegretTrace& trace) {
  std::vector<double> r;
  r.reserve(trace.steps.size());
  for (const StepRecord& s : trace.steps) r.push_back(s.r_inst);
  return cumulative(r);
}

}  // namespace wdrbo
