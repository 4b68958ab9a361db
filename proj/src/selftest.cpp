#include "wdrbo/selftest.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <sstream>

#include "wdrbo/acquisition.hpp"
#include "wdrbo/ambiguity.hpp"
#include "wdrbo/kernel.hpp"
#include "wdrbo/surrogate.hpp"

namespace wdrbo {

namespace {

Eigen::MatrixXd uniform_points(Rng& rng, Eigen::Index n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd Z(n, d);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z(i) = u(rng);
  return Z;
}

Surrogate random_surrogate(Rng& rng, Eigen::Index n, Eigen::Index d, const KernelSpec& k) {
  const Eigen::MatrixXd Z = uniform_points(rng, n, d);
  Eigen::VectorXd y(n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = std::sin(3.0 * Z(i, 0)) + Z.row(i).sum() + 0.05 * g(rng);
  return Surrogate::fit(k, Z, y, SurrogateOptions{0.1, 0.1, 1.0, 0.05, BetaMode::fixed(1.5)});
}

CheckResult check(std::string name, bool ok, const std::string& detail) { return {std::move(name), ok, detail}; }

CheckResult kernel_psd(Rng& rng) {
  double worst = 0.0;
  bool symmetric = true;
  const KernelSpec k = KernelSpec::squared_exponential(Eigen::VectorXd::Constant(1, 0.3));
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd G = gram(k, uniform_points(rng, 15, 2));
    symmetric = symmetric && (G - G.transpose()).cwiseAbs().maxCoeff() == 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    worst = std::min(worst, eig.eigenvalues().minCoeff());
  }
  std::ostringstream d;
  d << "min eigenvalue " << worst;
  return check("kernel gram symmetric and PSD", symmetric && worst >= -1e-9, d.str());
}

CheckResult kernel_lipschitz(Rng& rng) {
  int violations = 0;
  for (KernelFamily fam : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
    const KernelSpec k{fam, Eigen::VectorXd::Constant(1, 0.4), 1.0};
    const double L = lipschitz_constant(k, 2.0);
    const Eigen::MatrixXd A = uniform_points(rng, 1000, 2);
    const Eigen::MatrixXd B = uniform_points(rng, 1000, 2);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (feature_distance(k, A.row(i), B.row(i)) > L * (A.row(i) - B.row(i)).norm() + 1e-9) ++violations;
    }
  }
  return check("kernel feature map Lipschitz", violations == 0, std::to_string(violations) + " violations");
}

CheckResult update_matches_fit(Rng& rng) {
  const KernelSpec k = KernelSpec::squared_exponential(Eigen::VectorXd::Constant(1, 0.3));
  const Eigen::MatrixXd Z = uniform_points(rng, 10, 2);
  Eigen::VectorXd y = Z.col(0).array().sin() + Z.col(1).array();
  Surrogate inc(k, 2, {});
  double prev_max = 0.0;
  bool monotone = true;
  const Eigen::MatrixXd probes = uniform_points(rng, 20, 2);
  Eigen::VectorXd prev_std = inc.predict(probes).std;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    inc = inc.update(Z.row(i).transpose(), y(i));
    const Eigen::VectorXd s = inc.predict(probes).std;
    monotone = monotone && (s.array() <= prev_std.array() + 1e-9).all();
    prev_std = s;
  }
  const Surrogate batch = Surrogate::fit(k, Z, y, {});
  const Prediction a = inc.predict(probes);
  const Prediction b = batch.predict(probes);
  prev_max = std::max((a.mean - b.mean).cwiseAbs().maxCoeff(), (a.std - b.std).cwiseAbs().maxCoeff());
  std::ostringstream d;
  d << "max deviation " << prev_max << (monotone ? "" : ", variance increased");
  return check("incremental update equals batch fit", prev_max <= 1e-8 && monotone, d.str());
}

CheckResult wasserstein_metric(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(8), b(8), c(8);
    for (std::size_t i = 0; i < 8; ++i) {
      a[i] = g(rng);
      b[i] = g(rng) + 0.5;
      c[i] = 2.0 * g(rng);
    }
    const double ab = wasserstein_1d(a, b), ba = wasserstein_1d(b, a);
    const double ac = wasserstein_1d(a, c), bc = wasserstein_1d(b, c);
    if (std::abs(ab - ba) > 1e-9 || ac > ab + bc + 1e-9) ++violations;
  }
  return check("wasserstein_1d symmetric and triangle", violations == 0, std::to_string(violations) + " violations");
}

CheckResult lipschitz_gap(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double L = 0.5 + 3.0 * u(rng);
    // g(c) = L * |c - knot| has Lipschitz constant L.
    const double knot = u(rng);
    std::vector<double> p(10), q(10);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = u(rng);
      q[i] = u(rng) * 1.5;
    }
    double ep = 0.0, eq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      ep += L * std::abs(p[i] - knot) / 10.0;
      eq += L * std::abs(q[i] - knot) / 10.0;
    }
    if (std::abs(eq - ep) > robust_gap_bound(wasserstein_1d(p, q), L) + 1e-9) ++violations;
  }
  return check("Lipschitz expectation gap bounded by eps L", violations == 0, std::to_string(violations) + " violations");
}

CheckResult erbo_equivalence(Rng& rng) {
  const KernelSpec k = KernelSpec::squared_exponential(Eigen::VectorXd::Constant(1, 0.3));
  const Surrogate model = random_surrogate(rng, 12, 2, k);
  AcquisitionProblem p{model, 1.5, Box::cube(1, 0.0, 1.0), Box::cube(1, 0.0, 1.0),
                       uniform_points(rng, 6, 1), 0.0, LipschitzMode::numeric(8), MultiStartConfig{}};
  const Maximum robust = maximize(p);
  const Maximum plain = maximize_on_box([&](const Eigen::VectorXd& x) { return expected_ucb(p, x); }, p.x_bounds, p.optimizer);
  const bool same = robust.x == plain.x && robust.value == plain.value;
  return check("zero radius equals empirical-risk acquisition", same, same ? "identical" : "argmax differs");
}

CheckResult lipschitz_dominance(Rng& rng) {
  const KernelSpec k = KernelSpec::squared_exponential(Eigen::VectorXd::Constant(1, 0.3));
  int violations = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Surrogate model = random_surrogate(rng, 5 + 4 * trial, 2, k);
    AcquisitionProblem p{model, model.beta(), Box::cube(1, 0.0, 1.0), Box::cube(1, 0.0, 1.0),
                         uniform_points(rng, 4, 1), 0.1, LipschitzMode::numeric(16), MultiStartConfig{}};
    AcquisitionProblem a = p;
    a.lipschitz = LipschitzMode::analytic();
    // Fixed beta can exceed sqrt(lambda) B_bar, so compare with the theoretical beta.
    p.beta = model.theoretical_beta();
    for (double x : {0.1, 0.5, 0.9}) {
      const Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
      if (ucb_context_lipschitz(p, xv) > ucb_context_lipschitz(a, xv) + 1e-6) ++violations;
    }
  }
  return check("numeric UCB Lipschitz below analytic bound", violations == 0, std::to_string(violations) + " violations");
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  Rng rng(20240917);
  std::vector<CheckResult> out;
  out.push_back(kernel_psd(rng));
  out.push_back(kernel_lipschitz(rng));
  out.push_back(update_matches_fit(rng));
  out.push_back(wasserstein_metric(rng));
  out.push_back(lipschitz_gap(rng));
  out.push_back(erbo_equivalence(rng));
  out.push_back(lipschitz_dominance(rng));
  return out;
}

}  // namespace wdrbo
