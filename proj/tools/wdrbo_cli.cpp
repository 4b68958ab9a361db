// wdrbo: experiment runner for distributionally robust contextual BO.
//
//   wdrbo run <config.json> [--out DIR]
//   wdrbo compare <config.json> [--out DIR]
//   wdrbo oracle <config.json>
//   wdrbo selftest
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <CLI11.hpp>
#include <iostream>

#include "wdrbo/config.hpp"
#include "wdrbo/errors.hpp"
#include "wdrbo/harness.hpp"
#include "wdrbo/report.hpp"
#include "wdrbo/selftest.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

int execute(const wdrbo::ExperimentConfig& config, bool single) {
  if (single && config.algorithms.size() != 1) {
    throw wdrbo::InputError("config: acquisition.algo: run takes exactly one algorithm, use compare for several");
  }
  const auto traces = wdrbo::run(config);
  int failed = 0;
  for (const auto& tr : traces) {
    if (!tr.failure.empty()) {
      ++failed;
      std::cerr << "warning: " << tr.algorithm << " seed " << tr.seed << " aborted: " << tr.failure << "\n";
    }
  }
  const auto summary = wdrbo::aggregate(traces);
  wdrbo::emit(summary, traces, config, config.output);
  for (const auto& s : summary.series) {
    std::cout << s.algorithm << ": R_T = " << s.mean.back() << " +- " << s.std_error.back() << " over " << s.n_seeds
              << " seeds, " << s.wall_ms_mean / 1000.0 << " s per seed\n";
  }
  std::cout << "wrote " << config.output.string() << "\n";
  return failed == 0 ? kOk : kRuntime;
}

int print_oracle(const wdrbo::ExperimentConfig& config) {
  const auto env = wdrbo::resolve_environment(config);
  std::cout << "seed,t";
  for (Eigen::Index i = 0; i < env.dx(); ++i) std::cout << ",x_" << i;
  std::cout << ",value\n";
  for (std::uint64_t seed : config.seeds) {
    const auto panel = wdrbo::EvaluationPanel::draw(env, config.oracle_mc_samples,
                                                    wdrbo::derive_seed(seed, wdrbo::Stream::Panel));
    const auto oracle = wdrbo::oracle_best(env, panel, config.oracle_grid);
    // The true context distribution is time-invariant, so x*_t is the same for all t.
    std::cout << seed << ",1-" << config.horizon;
    for (Eigen::Index i = 0; i < oracle.x.size(); ++i) std::cout << ',' << wdrbo::format_number(oracle.x(i));
    std::cout << ',' << wdrbo::format_number(oracle.value) << "\n";
  }
  return kOk;
}

int selftest() {
  int failed = 0;
  for (const auto& r : wdrbo::run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    if (!r.passed) ++failed;
  }
  return failed == 0 ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein distributionally robust Bayesian optimization with continuous context"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  auto* run_cmd = app.add_subcommand("run", "Run one algorithm over all configured seeds");
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_override, "Override the output directory");
  auto* compare_cmd = app.add_subcommand("compare", "Run several algorithms on shared contexts and panels");
  compare_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  compare_cmd->add_option("--out", out_override, "Override the output directory");
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the benchmark decision x*_t per seed");
  oracle_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the fast property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kValidation;
  }

  try {
    if (*selftest_cmd) return selftest();
    auto config = wdrbo::load_config(config_path);
    if (!out_override.empty()) config.output = out_override;
    if (*run_cmd) return execute(config, true);
    if (*compare_cmd) return execute(config, false);
    if (*oracle_cmd) return print_oracle(config);
  } catch (const wdrbo::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kRuntime;
  }
  return kValidation;
}
