#include "wdrbo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <atomic>
#include <map>
#include <thread>

#include "wdrbo/acquisition.hpp"
#include "wdrbo/errors.hpp"

namespace wdrbo {

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

SeedContext prepare_seed(const ExperimentConfig& config, const Environment& env, std::uint64_t seed) {
  SeedContext shared;
  shared.seed = seed;
  shared.panel = EvaluationPanel::draw(env, config.oracle_mc_samples, derive_seed(seed, Stream::Panel));
  shared.oracle = oracle_best(env, shared.panel, config.oracle_grid);
  Rng rng(derive_seed(seed, Stream::Contexts));
  shared.contexts = env.true_context.sample(rng, config.horizon);
  return shared;
}

RegretTrace run_single(const ExperimentConfig& config, const Environment& env, Algorithm algorithm,
                       const SeedContext& shared) {
  using Clock = std::chrono::steady_clock;

  RegretTrace trace;
  trace.algorithm = to_string(algorithm);
  trace.seed = shared.seed;
  trace.oracle = shared.oracle;

  const KernelSpec kernel = resolve_kernel(config, env);
  const Eigen::Index dx = env.dx();
  const Eigen::Index dc = env.dc();
  AmbiguityModel ambiguity = resolve_ambiguity(config, env);
  Surrogate model(kernel, dx + dc, config.surrogate);
  Surrogate model_x(kernel.head(dx), dx, config.surrogate);

  Rng noise_rng(derive_seed(shared.seed, Stream::Noise));
  Rng center_rng(derive_seed(shared.seed, Stream::Center));

  bool pending = false;
  Eigen::VectorXd pending_z(dx + dc);
  double pending_y = 0.0;

  try {
    for (int t = 1; t <= config.horizon; ++t) {
      const auto start = Clock::now();
      if (pending) {
        if (algorithm == Algorithm::GPUCB) {
          model_x = model_x.update(pending_z.head(dx), pending_y);
        } else {
          model = model.update(pending_z, pending_y);
        }
      }

      MultiStartConfig optimizer = config.optimizer;
      optimizer.rng_seed = derive_seed(shared.seed, Stream::Optimizer, std::uint64_t(t));
      double epsilon = 0.0;
      Eigen::VectorXd x;
      switch (algorithm) {
        case Algorithm::WDRBO:
        case Algorithm::ERBO: {
          epsilon = algorithm == Algorithm::WDRBO ? ambiguity.radius_at(t) : 0.0;
          const CenterDistribution center = ambiguity.center_at(t);
          AcquisitionProblem problem{model,
                                     model.beta(),
                                     env.x_bounds,
                                     env.c_bounds,
                                     center.samples(center_rng, config.center_mc_samples),
                                     epsilon,
                                     config.lipschitz,
                                     optimizer};
          x = maximize(problem).x;
          break;
        }
        case Algorithm::StableOpt: {
          const Box box = stableopt_context_box(ambiguity.history(), env.c_bounds);
          x = stableopt_select(model, model.beta(), env.x_bounds, box, config.stableopt_grid, optimizer).x;
          break;
        }
        case Algorithm::GPUCB:
          x = gpucb_select(model_x, model_x.beta(), env.x_bounds, optimizer).x;
          break;
      }
      const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

      const Eigen::VectorXd c = shared.contexts.row(t - 1).transpose();
      const double y = observe(env, x, c, noise_rng);
      ambiguity.record_context(c);
      pending_z << x, c;
      pending_y = y;
      pending = true;

      const RegretValue regret = instantaneous_regret(env, shared.oracle, shared.panel, x);
      trace.push({t, x, c, y, epsilon, regret.clamped, regret.raw, 0.0, elapsed});
    }
  } catch (const NumericalError& e) {
    trace.failure = e.what();
  }
  return trace;
}

std::vector<RegretTrace> run(const ExperimentConfig& config) {
  config.validate();
  const Environment env = resolve_environment(config);
  const std::size_t n_seeds = config.seeds.size();
  const std::size_t n_algos = config.algorithms.size();
  std::vector<RegretTrace> traces(n_seeds * n_algos);

  auto work = [&](std::size_t s) {
    const SeedContext shared = prepare_seed(config, env, config.seeds[s]);
    for (std::size_t a = 0; a < n_algos; ++a) {
      traces[a * n_seeds + s] = run_single(config, env, config.algorithms[a], shared);
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::size_t(config.threads), n_seeds);
  if (workers <= 1) {
    for (std::size_t s = 0; s < n_seeds; ++s) work(s);
    return traces;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < n_seeds; s = next++) work(s);
      });
    }
  }
  return traces;
}

const SeriesSummary& RunSummary::at(const std::string& algorithm) const {
  for (const SeriesSummary& s : series) {
    if (s.algorithm == algorithm) return s;
  }
  throw InputError("summary: no series for algorithm '" + algorithm + "'");
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
  if (values.empty()) throw InputError("mean_and_stderr: no values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

RunSummary aggregate(const std::vector<RegretTrace>& traces) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RegretTrace*>> groups;
  for (const RegretTrace& tr : traces) {
    if (!tr.failure.empty()) continue;
    if (!groups.count(tr.algorithm)) order.push_back(tr.algorithm);
    groups[tr.algorithm].push_back(&tr);
  }
  if (order.empty()) throw InputError("aggregate: no complete traces");

  RunSummary summary;
  for (const std::string& name : order) {
    const auto& group = groups[name];
    const int horizon = group.front()->horizon();
    for (const RegretTrace* tr : group) {
      if (tr->horizon() != horizon) {
        throw InputError("aggregate: traces of '" + name + "' have different horizons (" + std::to_string(horizon) +
                         " vs " + std::to_string(tr->horizon()) + ")");
      }
    }
    SeriesSummary s;
    s.algorithm = name;
    s.n_seeds = static_cast<int>(group.size());
    std::vector<double> column(group.size());
    for (int t = 0; t < horizon; ++t) {
      for (std::size_t i = 0; i < group.size(); ++i) column[i] = group[i]->steps[std::size_t(t)].r_cum;
      const auto [m, e] = mean_and_stderr(column);
      s.mean.push_back(m);
      s.std_error.push_back(e);
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      double total = 0.0;
      for (const StepRecord& step : group[i]->steps) total += step.elapsed_ms;
      column[i] = total;
    }
    std::tie(s.wall_ms_mean, s.wall_ms_stderr) = mean_and_stderr(column);
    summary.series.push_back(std::move(s));
  }
  return summary;
}

}  // namespace wdrbo
