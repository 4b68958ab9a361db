#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wdrbo/ambiguity.hpp"
#include "wdrbo/errors.hpp"

using namespace wdrbo;

namespace {

std::vector<double> draw(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = u(rng);
  return out;
}

// Continuous piecewise-linear function with random knots and slopes in [-L, L].
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> slopes;  // slopes[i] applies right of knots[i]; slopes[0] left of knots[0] too
  double value_at_first = 0.0;

  double operator()(double x) const {
    if (x <= knots.front()) return value_at_first + slopes.front() * (x - knots.front());
    double v = value_at_first;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const double right = (i + 1 < knots.size()) ? knots[i + 1] : INFINITY;
      if (x <= right) return v + slopes[i] * (x - knots[i]);
      v += slopes[i] * (right - knots[i]);
    }
    return v;
  }
};

}  // namespace

TEST(Radius, Schedules) {
  EXPECT_DOUBLE_EQ(RadiusSchedule::constant(0.1).at(1), 0.1);
  EXPECT_DOUBLE_EQ(RadiusSchedule::constant(0.1).at(77), 0.1);
  EXPECT_DOUBLE_EQ(RadiusSchedule::inverse_sqrt(1.0).at(4), 0.5);
  EXPECT_DOUBLE_EQ(RadiusSchedule::inverse_sqrt(2.0).at(1), 2.0);
  const auto table = RadiusSchedule::explicit_table({0.3, 0.2, 0.1});
  EXPECT_DOUBLE_EQ(table.at(2), 0.2);
  EXPECT_THROW(table.at(4), InputError);
  EXPECT_THROW(RadiusSchedule::constant(0.1).at(0), InputError);
  EXPECT_THROW(RadiusSchedule::constant(-0.1), InputError);
  const auto inv = RadiusSchedule::inverse_sqrt(1.0);
  for (int t = 1; t < 500; ++t) ASSERT_LT(inv.at(t + 1), inv.at(t));
}

TEST(Wasserstein, Examples) {
  const std::vector<double> zero{0.0}, one{1.0};
  EXPECT_DOUBLE_EQ(wasserstein_1d(zero, one), 1.0);
  const std::vector<double> a{0.3, -1.0, 2.0};
  EXPECT_DOUBLE_EQ(wasserstein_1d(a, a), 0.0);
  const std::vector<double> shifted{1.3, 0.0, 3.0};
  EXPECT_NEAR(wasserstein_1d(a, shifted), 1.0, 1e-15);
  const std::vector<double> two{0.0, 1.0};
  EXPECT_THROW(wasserstein_1d(a, two), InputError);
  EXPECT_THROW(wasserstein_1d(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST(Wasserstein, MatchesPermutationOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = draw(rng, 6, -2.0, 2.0), b = draw(rng, 6, -1.0, 3.0);
    EXPECT_NEAR(wasserstein_1d(a, b), oracle::wasserstein_bruteforce(a, b), 1e-12);
  }
}

TEST(Wasserstein, MetricProperties) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = draw(rng, 15, 0.0, 1.0), b = draw(rng, 15, -0.5, 1.0), c = draw(rng, 15, 0.2, 2.0);
    const double ab = wasserstein_1d(a, b), ba = wasserstein_1d(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(wasserstein_1d(a, c), ab + wasserstein_1d(b, c) + 1e-9);
  }
}

TEST(Wasserstein, LipschitzGapBound) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double L = 0.1 + 5.0 * u(rng);
    PiecewiseLinear g;
    g.knots = draw(rng, 6, -1.0, 2.0);
    std::sort(g.knots.begin(), g.knots.end());
    for (std::size_t i = 0; i < g.knots.size(); ++i) g.slopes.push_back(L * (2.0 * u(rng) - 1.0));
    g.slopes[0] = (trial % 2 ? L : -L);  // make L attained
    g.value_at_first = u(rng);

    const auto p = draw(rng, 40, 0.0, 1.0);
    auto q = p;
    for (double& v : q) v += 0.3 * (u(rng) - 0.5);
    double ep = 0.0, eq = 0.0;
    for (double v : p) ep += g(v);
    for (double v : q) eq += g(v);
    ep /= 40.0;
    eq /= 40.0;
    const double w = wasserstein_1d(p, q);
    if (std::abs(eq - ep) > w * L + 1e-9) ++violations;
    EXPECT_LE(std::abs(eq - ep), robust_gap_bound(w, L) + 1e-9);
  }
  EXPECT_EQ(violations, 0);
}

TEST(Ambiguity, EmpiricalCenterUsesPastContexts) {
  AmbiguityModel m(EmpiricalCenter{}, RadiusSchedule::inverse_sqrt(1.0), Box::cube(1, 0.0, 2.0));
  // No history: Dirac at the box midpoint.
  const auto c1 = m.center_at(1);
  ASSERT_TRUE(c1.enumerable());
  ASSERT_EQ(c1.atoms().rows(), 1);
  EXPECT_DOUBLE_EQ(c1.atoms()(0, 0), 1.0);

  m.record_context(Eigen::VectorXd::Constant(1, 0.25));
  m.record_context(Eigen::VectorXd::Constant(1, 0.75));
  const auto c3 = m.center_at(3);
  ASSERT_EQ(c3.atoms().rows(), 2);
  EXPECT_DOUBLE_EQ(c3.atoms()(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(c3.atoms()(1, 0), 0.75);
  // The center at step t only sees c_1 .. c_{t-1}.
  EXPECT_EQ(m.center_at(2).atoms().rows(), 1);
  EXPECT_DOUBLE_EQ(m.radius_at(4), 0.5);
  EXPECT_THROW(m.record_context(Eigen::Vector2d(0.0, 0.0)), InputError);
}

TEST(Ambiguity, ParametricCenterSamples) {
  const auto dist = ContextDistribution::normal(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 0.1));
  AmbiguityModel m(ParametricCenter{dist}, RadiusSchedule::constant(0.1), Box::cube(1, 0.0, 1.0));
  const auto center = m.center_at(10);
  ASSERT_FALSE(center.enumerable());
  Rng rng(5);
  const Eigen::MatrixXd s = center.samples(rng, 20000);
  ASSERT_EQ(s.rows(), 20000);
  const auto [mean, sd] = column_moments(s);
  EXPECT_NEAR(mean[0], 0.5, 0.005);
  EXPECT_NEAR(sd[0], 0.1, 0.005);
}

TEST(Distribution, ClippedNormalAndUniform) {
  Rng rng(31);
  const auto clipped = ContextDistribution::normal(Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Constant(2, 1.0),
                                                   Box::cube(2, 0.0, 1.0));
  const Eigen::MatrixXd s = clipped.sample(rng, 5000);
  EXPECT_GE(s.minCoeff(), 0.0);
  EXPECT_LE(s.maxCoeff(), 1.0);
  ASSERT_TRUE(clipped.support().has_value());

  const auto uni = ContextDistribution::uniform(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 3.0));
  const auto [mean, sd] = column_moments(uni.sample(rng, 40000));
  EXPECT_NEAR(mean[0], 1.0, 0.03);
  EXPECT_NEAR(sd[0], 4.0 / std::sqrt(12.0), 0.02);
  EXPECT_FALSE(ContextDistribution::normal(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)).support().has_value());
  EXPECT_THROW(ContextDistribution::uniform(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)), InputError);
}

TEST(Distribution, ColumnMomentsArePopulationMoments) {
  Eigen::MatrixXd s(4, 1);
  s << 1.0, 2.0, 3.0, 4.0;
  const auto [mean, sd] = column_moments(s);
  EXPECT_DOUBLE_EQ(mean[0], 2.5);
  EXPECT_NEAR(sd[0], std::sqrt(1.25), 1e-15);
}

TEST(Ambiguity, CorrectionTerm) {
  EXPECT_DOUBLE_EQ(data_driven_correction(4, 2.0, 1.5), (1.0 + 2.0 * 2.0 * 1.5) / 4.0);
  EXPECT_DOUBLE_EQ(robust_gap_bound(0.1, 6.8956), 0.1 * 6.8956);
  EXPECT_THROW(robust_gap_bound(-0.1, 1.0), InputError);
}
