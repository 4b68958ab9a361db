// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path-to-wdrbo-cli> <scratch-dir>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wdrbo/acquisition.hpp"
#include "wdrbo/ambiguity.hpp"
#include "wdrbo/config.hpp"
#include "wdrbo/harness.hpp"
#include "wdrbo/regret.hpp"
#include "wdrbo/report.hpp"

using namespace wdrbo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

KernelSpec se(double ell) { return KernelSpec::squared_exponential(Eigen::VectorXd::Constant(1, ell)); }

// Surrogate on [0,1]^2 fitted to noisy samples of an RKHS function with norm B.
struct RkhsRun {
  oracle::RkhsFunction f;
  Surrogate model;
};

RkhsRun fitted_rkhs_surrogate(std::mt19937_64& rng, int n, const SurrogateOptions& opts, double ell) {
  auto f = oracle::random_rkhs_function(rng, 8, 2, ell, opts.norm_bound);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, opts.noise_bound);
  Eigen::MatrixXd Z(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    Z.row(i) << u(rng), u(rng);
    y[i] = f(Z.row(i).transpose()) + noise(rng);
  }
  return {f, Surrogate::fit(se(ell), Z, y, opts)};
}

Outcome general_setting() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = parse_config(R"({
    "env": "general", "T": 100, "n_seeds": 15, "lambda": 0.1,
    "ambiguity": {"center": {"normal": [0.5, 0.1]}, "radius": {"constant": 0.1}},
    "acquisition": {"algo": ["wdrbo", "erbo"], "beta": 1.5}
  })");
  const RunSummary summary = aggregate(run(cfg));
  const SeriesSummary& w = summary.at("wdrbo");
  const SeriesSummary& e = summary.at("erbo");
  const double rw = w.mean.back(), re = e.mean.back();
  const double pooled = std::hypot(w.std_error.back(), e.std_error.back());
  const double elapsed = seconds_since(start);
  const bool ok = w.n_seeds == 15 && e.n_seeds == 15 && rw < re && (re - rw) > pooled && elapsed < 600.0;
  return {ok, "R_100 wdrbo " + fmt(rw) + " +- " + fmt(w.std_error.back()) + ", erbo " + fmt(re) + " +- " +
                  fmt(e.std_error.back()) + ", gap " + fmt(re - rw) + " vs pooled stderr " + fmt(pooled) + ", " +
                  fmt(elapsed, 3) + " s"};
}

Outcome erbo_degeneracy() {
  const ExperimentConfig cfg = parse_config(R"({
    "env": "general", "T": 100, "seeds": [0, 1, 2],
    "ambiguity": {"center": {"normal": [0.5, 0.1]}, "radius": {"constant": 0.0}},
    "acquisition": {"algo": ["wdrbo", "erbo"]}
  })");
  const auto traces = run(cfg);
  int identical = 0;
  for (int s = 0; s < 3; ++s) {
    if (!traces[s].failure.empty()) continue;
    if (trace_csv(traces[s], false) == trace_csv(traces[3 + s], false)) ++identical;
  }
  return {identical == 3, std::to_string(identical) + "/3 seeds byte-identical"};
}

Outcome confidence_coverage() {
  const auto start = Clock::now();
  SurrogateOptions opts;
  opts.lambda = 0.1;
  opts.noise_bound = 0.1;
  opts.norm_bound = 1.0;
  opts.delta = 0.05;
  opts.beta = BetaMode::theoretical();
  const double ell = 0.2;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, opts.noise_bound);
  Eigen::MatrixXd probes(64, 2);
  for (int i = 0; i < 64; ++i) probes.row(i) << u(rng), u(rng);

  int covered = 0;
  const int runs = 200;
  for (int r = 0; r < runs; ++r) {
    const auto f = oracle::random_rkhs_function(rng, 8, 2, ell, opts.norm_bound);
    Eigen::VectorXd truth(64);
    for (int i = 0; i < 64; ++i) truth[i] = f(probes.row(i).transpose());
    Surrogate model(se(ell), 2, opts);
    bool ok = true;
    for (int t = 1; t <= 30 && ok; ++t) {
      // Query the current UCB maximizer among the probes, so the design is adaptive.
      const Prediction pred = model.predict(probes);
      const double beta = model.beta();
      ok = ((pred.mean - truth).array().abs() <= beta * pred.std.array()).all();
      Eigen::Index pick = 0;
      (pred.mean + beta * pred.std).maxCoeff(&pick);
      const Eigen::Vector2d z(std::clamp(probes(pick, 0) + 0.05 * (u(rng) - 0.5), 0.0, 1.0),
                              std::clamp(probes(pick, 1) + 0.05 * (u(rng) - 0.5), 0.0, 1.0));
      model = model.update(z, f(z) + noise(rng));
    }
    if (ok) ++covered;
  }
  const double rate = double(covered) / runs;
  const double elapsed = seconds_since(start);
  return {rate >= 0.95 && elapsed < 300.0,
          "coverage " + std::to_string(covered) + "/" + std::to_string(runs) + ", " + fmt(elapsed, 3) + " s"};
}

Outcome lipschitz_gap_bound() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 60);
  int violations = 0;
  double tightest = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    // g is piecewise linear through random knots with slopes in [-L, L].
    const double L = 0.1 + 4.9 * u(rng);
    std::vector<double> knots(8), values(8);
    for (double& k : knots) k = -1.0 + 3.0 * u(rng);
    std::sort(knots.begin(), knots.end());
    values[0] = u(rng);
    for (std::size_t i = 1; i < knots.size(); ++i) values[i] = values[i - 1] + L * (2.0 * u(rng) - 1.0) * (knots[i] - knots[i - 1]);
    auto g = [&](double x) {
      if (x <= knots.front()) return values.front();
      if (x >= knots.back()) return values.back();
      const auto it = std::upper_bound(knots.begin(), knots.end(), x);
      const std::size_t j = std::size_t(it - knots.begin());
      const double w = (x - knots[j - 1]) / (knots[j] - knots[j - 1]);
      return values[j - 1] + w * (values[j] - values[j - 1]);
    };
    const int n = size(rng);
    std::vector<double> p(n), q(n);
    const double shift = 0.5 * (u(rng) - 0.5), spread = 0.3 * u(rng);
    for (int i = 0; i < n; ++i) {
      p[i] = u(rng);
      q[i] = p[i] + shift + spread * (u(rng) - 0.5);
    }
    double ep = 0.0, eq = 0.0;
    for (int i = 0; i < n; ++i) ep += g(p[i]), eq += g(q[i]);
    ep /= n;
    eq /= n;
    const double w = wasserstein_1d(p, q);
    const double gap = std::abs(eq - ep);
    if (gap > w * L + 1e-9) ++violations;
    if (w > 0.0) tightest = std::max(tightest, gap / (w * L));
  }
  return {violations == 0, std::to_string(violations) + " violations in 100 pairs, max gap/(wL) " + fmt(tightest)};
}

Outcome ucb_lipschitz_dominance() {
  SurrogateOptions opts;
  opts.lambda = 0.1;
  opts.noise_bound = 0.1;
  opts.norm_bound = 1.0;
  opts.beta = BetaMode::theoretical();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 30);
  int ucb_violations = 0, mean_violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double ell = 0.1 + 0.4 * u(rng);
    const RkhsRun fitted = fitted_rkhs_surrogate(rng, size(rng), opts, ell);
    const Surrogate& m = fitted.model;
    const double L = lipschitz_constant(m.kernel());
    const double bbar = m.mean_norm_bound();
    Eigen::MatrixXd whole(2, 1);
    whole << 0.0, 1.0;  // center samples spanning C, so the scan covers the full box
    AcquisitionProblem p{m, m.beta(), Box::cube(1, 0.0, 1.0), Box::cube(1, 0.0, 1.0), whole, 0.1};
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, u(rng));
      const double numeric = ucb_context_lipschitz(p, x);
      if (numeric > 2.0 * bbar * L + 1e-6) ++ucb_violations;
      worst_ratio = std::max(worst_ratio, numeric / (2.0 * bbar * L));
      // Sampled slopes of the mean alone over random context pairs.
      for (int s = 0; s < 20; ++s) {
        const double c1 = u(rng), c2 = u(rng);
        if (c1 == c2) continue;
        const double slope = std::abs(m.posterior_mean(Eigen::Vector2d(x[0], c1)) -
                                      m.posterior_mean(Eigen::Vector2d(x[0], c2))) / std::abs(c1 - c2);
        if (slope > bbar * L + 1e-6) ++mean_violations;
      }
      if (max_context_slope(m, 0.0, x, p.c_bounds, 32) > bbar * L + 1e-6) ++mean_violations;
    }
  }
  return {ucb_violations == 0 && mean_violations == 0,
          std::to_string(ucb_violations) + " UCB and " + std::to_string(mean_violations) +
              " mean violations over 100 surrogates, max numeric/(2 B_bar L) " + fmt(worst_ratio)};
}

Outcome data_driven_trend() {
  const ExperimentConfig cfg = parse_config(R"({
    "env": "three_humps", "T": 100, "n_seeds": 15,
    "ambiguity": {"center": "empirical", "radius": {"inv_sqrt": 1.0}},
    "acquisition": {"algo": "wdrbo"}
  })");
  const SeriesSummary& s = aggregate(run(cfg)).at("wdrbo");
  const double at50 = s.mean[49] / 50.0, at100 = s.mean[99] / 100.0;
  const double reduction = 1.0 - at100 / at50;
  return {s.n_seeds == 15 && reduction >= 0.10,
          "mean R_t/t " + fmt(at50) + " at t=50, " + fmt(at100) + " at t=100, reduction " + fmt(100 * reduction, 3) + "%"};
}

Outcome property_suite() {
  const auto start = Clock::now();
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 20);

  for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
    const KernelSpec k{family, Eigen::VectorXd::Constant(1, 0.3), 1.0};
    bool psd = true, symmetric = true, bounded = true, assumption = true;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = size(rng);
      Eigen::MatrixXd Z(n, 2);
      for (int i = 0; i < n; ++i) Z.row(i) << u(rng), u(rng);
      const Eigen::MatrixXd K = gram(k, Z);
      psd = psd && Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff() >= -1e-9;
    }
    const double L = lipschitz_constant(k);
    for (int i = 0; i < 10000; ++i) {
      const Eigen::Vector2d a(u(rng), u(rng)), b(u(rng), u(rng));
      const double ab = eval(k, a, b);
      symmetric = symmetric && ab == eval(k, b, a);
      bounded = bounded && std::abs(ab) <= 1.0;
      assumption = assumption && feature_distance(k, a, b) <= L * (a - b).norm() + 1e-9;
    }
    const std::string tag = to_string(family);
    check(psd, tag + " psd");
    check(symmetric, tag + " symmetry");
    check(bounded, tag + " boundedness");
    check(assumption, tag + " assumption 1");
  }

  // Variance monotonicity over 20 update sequences.
  Eigen::MatrixXd probes(40, 2);
  for (int i = 0; i < 40; ++i) probes.row(i) << u(rng), u(rng);
  bool monotone = true;
  for (int seq = 0; seq < 20; ++seq) {
    Surrogate m(se(0.2), 2, {});
    Eigen::VectorXd prev = m.predict(probes).std;
    for (int t = 0; t < 40; ++t) {
      m = m.update(Eigen::Vector2d(u(rng), u(rng)), u(rng));
      const Eigen::VectorXd now = m.predict(probes).std;
      monotone = monotone && (now.array() <= prev.array() + 1e-9).all();
      prev = now;
    }
  }
  check(monotone, "variance monotonicity");

  // Interpolation limit with noise-free data.
  {
    SurrogateOptions opts;
    opts.lambda = 1e-8;
    Eigen::MatrixXd Z(15, 2);
    Eigen::VectorXd y(15);
    for (int i = 0; i < 15; ++i) {
      Z.row(i) << u(rng), u(rng);
      y[i] = std::sin(4.0 * Z(i, 0)) * Z(i, 1);
    }
    const Surrogate m = Surrogate::fit(se(0.3), Z, y, opts);
    double worst = 0.0;
    for (int i = 0; i < 15; ++i) worst = std::max(worst, std::abs(m.posterior_mean(Z.row(i).transpose()) - y[i]));
    check(worst <= 1e-3, "interpolation limit");
  }

  // UCB Lipschitz in context over sampled pairs, theoretical beta.
  {
    SurrogateOptions opts;
    opts.noise_bound = 0.1;
    opts.beta = BetaMode::theoretical();
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const RkhsRun fitted = fitted_rkhs_surrogate(rng, 1 + trial, opts, 0.25);
      const Surrogate& m = fitted.model;
      const double bound = 2.0 * m.mean_norm_bound() * lipschitz_constant(m.kernel());
      for (int s = 0; s < 200; ++s) {
        const double x = u(rng), c1 = u(rng), c2 = u(rng);
        if (c1 == c2) continue;
        const double slope = std::abs(m.ucb(Eigen::Vector2d(x, c1), m.beta()) - m.ucb(Eigen::Vector2d(x, c2), m.beta())) /
                             std::abs(c1 - c2);
        ok = ok && slope <= bound + 1e-6;
      }
    }
    check(ok, "UCB context Lipschitz");
  }

  // Incremental update agrees with a refit.
  {
    Surrogate inc(se(0.2), 2, {});
    Eigen::MatrixXd Z(25, 2);
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) {
      Z.row(i) << u(rng), u(rng);
      y[i] = u(rng);
      inc = inc.update(Z.row(i).transpose(), y[i]);
    }
    const Surrogate full = Surrogate::fit(se(0.2), Z, y);
    const Prediction a = inc.predict(probes), b = full.predict(probes);
    check((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-9 && (a.std - b.std).cwiseAbs().maxCoeff() < 1e-9,
          "update equals refit");
  }

  const double elapsed = seconds_since(start);
  std::string detail = failed.empty() ? "all properties hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {failed.empty() && elapsed < 120.0, detail + ", " + fmt(elapsed, 3) + " s"};
}

Outcome relative_overhead() {
  const ExperimentConfig cfg = parse_config(R"({
    "env": "ackley", "T": 100, "seeds": [0, 1, 2],
    "acquisition": {"algo": ["wdrbo", "erbo"], "lipschitz": "numeric"}
  })");
  const auto traces = run(cfg);
  double wd = 0.0, er = 0.0;
  int nw = 0, ne = 0;
  for (const auto& tr : traces) {
    for (const auto& s : tr.steps) {
      if (tr.algorithm == "wdrbo") wd += s.elapsed_ms, ++nw;
      else er += s.elapsed_ms, ++ne;
    }
  }
  const double mw = wd / std::max(nw, 1), me = er / std::max(ne, 1);
  return {nw == 300 && ne == 300 && mw <= 2.0 * me,
          "mean step " + fmt(mw) + " ms wdrbo vs " + fmt(me) + " ms erbo, ratio " + fmt(mw / me)};
}

Outcome oracle_sanity() {
  Environment quad;
  quad.name = "quad";
  quad.x_bounds = Box::cube(1, -1.0, 2.0);
  quad.c_bounds = Box::cube(1, -1.0, 2.0);
  quad.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) { return -std::pow(x[0] - 0.3, 2); };
  quad.true_context = ContextDistribution::normal(Eigen::VectorXd::Constant(1, 0.6), Eigen::VectorXd::Constant(1, 0.2));
  Environment track = quad;
  track.name = "track";
  track.objective = [](const Eigen::VectorXd& x, const Eigen::VectorXd& c) { return -std::pow(x[0] - c[0], 2); };

  const Oracle a = oracle_best(quad, EvaluationPanel::draw(quad, 20000, 1));
  const Oracle b = oracle_best(track, EvaluationPanel::draw(track, 20000, 1));
  const bool ok = std::abs(a.x[0] - 0.3) <= 1e-3 && std::abs(a.value) <= 1e-6 && std::abs(b.x[0] - 0.6) <= 2e-2 &&
                  std::abs(b.value + 0.04) <= 2e-3;
  return {ok, "quadratic x* " + fmt(a.x[0], 6) + " value " + fmt(a.value) + "; tracking x* " + fmt(b.x[0], 6) +
                  " value " + fmt(b.value)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty()) return {false, "no CLI path given"};
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path config = work / "det.json";
  std::ofstream(config) << R"({"env": "branin", "T": 15, "seeds": [5], "oracle": {"mc_samples": 2000},
                              "acquisition": {"algo": "wdrbo"}})";
  std::vector<fs::path> outs{work / "first", work / "second"};
  for (const auto& out : outs) {
    const std::string cmd = "\"" + cli + "\" run \"" + config.string() + "\" --out \"" + out.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(outs[0])) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(entry.path(), outs[0]);
    if (read_file(entry.path()) != read_file(outs[1] / rel)) return {false, rel.string() + " differs"};
    ++compared;
  }
  return {compared >= 2, std::to_string(compared) + " CSV files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "wdrbo_acceptance";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"general setting: wdrbo below erbo", general_setting},
      {"erbo degeneracy at zero radius", erbo_degeneracy},
      {"confidence coverage", confidence_coverage},
      {"wasserstein gap bound", lipschitz_gap_bound},
      {"ucb lipschitz dominance", ucb_lipschitz_dominance},
      {"data-driven sublinear trend", data_driven_trend},
      {"variance and psd property suite", property_suite},
      {"relative overhead on ackley", relative_overhead},
      {"oracle sanity", oracle_sanity},
      {"determinism of run", [&] { return determinism(cli, work); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " (" << o.detail
              << ")" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
