#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermoqm/ou_process.hpp"

using namespace thermoqm;

namespace {

struct RandomParams {
  std::mt19937_64 rng;
  explicit RandomParams(std::uint64_t seed) : rng(seed) {}
  OUParams next() {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    return {u(rng), u(rng), u(rng)};
  }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double normal() { return std::normal_distribution<double>()(rng); }
};

}  // namespace

TEST(OUParams, ValidatesAndDerivesGamma) {
  const OUParams p(3.0, 1.5, 2.0);
  EXPECT_EQ(p.gamma(), 3.0 / 1.5);
  EXPECT_DOUBLE_EQ(p.stationary_variance(), 2.0 / 3.0);
  EXPECT_THROW(OUParams(0.0, 1.0), DomainError);
  EXPECT_THROW(OUParams(1.0, -1.0), DomainError);
  EXPECT_THROW(OUParams(1.0, 1.0, 0.0), DomainError);
  const OUParams free = OUParams::free_diffusion(2.0);
  EXPECT_TRUE(free.is_free_diffusion());
  EXPECT_EQ(free.gamma(), 0.0);
  EXPECT_THROW(free.stationary_variance(), DomainError);
}

TEST(GateSequence, RequiresStrictlyIncreasingTimes) {
  EXPECT_THROW(GateSequence({0.0, 0.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(GateSequence({1.0, 0.5}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(GateSequence({0.0, 1.0}, {1.0}), DimensionError);
  EXPECT_THROW(GateSequence({}, {}), DomainError);
}

TEST(StationaryDensity, Examples) {
  const OUParams p(1.0, 1.0, 1.0);
  EXPECT_NEAR(stationary_density(p, 0.0), 0.398942280401432677939946059934, 1e-15);
  const OUParams q(2.3, 0.7, 1.4);
  for (double y : {0.1, 0.9, 3.3}) EXPECT_EQ(stationary_density(q, y), stationary_density(q, -y));
}

TEST(StationaryDensity, VarianceByGaussHermite) {
  const oracle::GaussHermite gh(40);
  RandomParams gen(10);
  for (int k = 0; k < 10; ++k) {
    const OUParams p = gen.next();
    const double var = gh.integrate([&](double y) { return y * y * stationary_density(p, y); }, 0.0,
                                    std::sqrt(p.k_b() / p.s()));
    EXPECT_NEAR(var, p.k_b() / p.s(), 1e-8);
  }
}

TEST(TransitionDensity, RejectsDegenerateTimes) {
  const OUParams p(1.0, 1.0);
  EXPECT_THROW(transition_density(p, 0.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(transition_density(p, 0.0, 0.0, -1.0), DomainError);
  EXPECT_THROW(transition_density(p, 0.0, 0.0, ComplexTime{}), DomainError);
  EXPECT_THROW(transition_density(p, 0.0, 0.0, ComplexTime(Complex(-0.1, 1.0))), DomainError);
  // gamma dtau = i pi is a zero of 1 - e^{-2 gamma dtau}.
  EXPECT_THROW(transition_density(p, 0.0, 0.0, ComplexTime::mechanical(kPi)), CausticError);
  EXPECT_NO_THROW(transition_density(p, 0.0, 0.0, ComplexTime::mechanical(kPi + 1e-6)));
}

TEST(TransitionDensity, ForgetsInitialConditionAtLongTimes) {
  const OUParams p(1.7, 0.9, 1.2);
  const double dtau = 50.0 / p.gamma();
  for (double y1 : {-3.0, 0.0, 2.0}) {
    for (double y2 : {-1.0, 0.5}) {
      EXPECT_NEAR(transition_density(p, y1, y2, dtau), stationary_density(p, y2), 1e-12);
    }
  }
}

TEST(TransitionDensity, WorkedExampleLnTwo) {
  const OUParams p(1.0, 1.0, 1.0);
  const double dtau = std::log(2.0);
  const auto m = transition_moments(p, 2.0, dtau);
  EXPECT_NEAR(m.mean, 1.0, 1e-15);
  EXPECT_NEAR(m.variance, 0.75, 1e-15);
  EXPECT_NEAR(transition_density(p, 2.0, 1.0, dtau), 0.460658865961780639020326194709, 1e-15);

  // Monte Carlo cross-check: 10^6 exact one-step samples, histogram bin at y2 = 1.
  const std::vector<double> times{0.0, dtau};
  const int n = 1000000;
  const double half_bin = 0.025;
  int in_bin = 0;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y2 = sample_path(p, FixedStart{2.0}, times, 99, i).values[1];
    sum += y2;
    sum2 += y2 * y2;
    in_bin += std::abs(y2 - 1.0) < half_bin ? 1 : 0;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_LE(std::abs(mean - 1.0) / std::sqrt(0.75 / n), 4.0);
  EXPECT_LE(std::abs(var - 0.75) / (0.75 * std::sqrt(2.0 / n)), 4.0);
  const double prob = static_cast<double>(in_bin) / n;
  const double expected = oracle::integrate([&](double y) { return transition_density(p, 2.0, y, dtau); },
                                            1.0 - half_bin, 1.0 + half_bin);
  EXPECT_LE(std::abs(prob - expected) / std::sqrt(expected * (1 - expected) / n), 4.0);
}

TEST(TransitionDensity, NormalizesForRandomParameters) {
  const oracle::GaussHermite gh(60);
  RandomParams gen(11);
  for (int k = 0; k < 20; ++k) {
    const OUParams p = gen.next();
    const double dtau = gen.uniform(0.01, 3.0) / p.gamma();
    const double y1 = 2.0 * gen.normal();
    const auto m = transition_moments(p, y1, dtau);
    const double total = gh.integrate([&](double y2) { return transition_density(p, y1, y2, dtau); }, m.mean,
                                      std::sqrt(m.variance));
    EXPECT_NEAR(total, 1.0, 1e-8);
    // Independent adaptive route on mean +/- 12 sd.
    const double sd = std::sqrt(m.variance);
    EXPECT_NEAR(oracle::integrate([&](double y2) { return transition_density(p, y1, y2, dtau); }, m.mean - 12 * sd,
                                  m.mean + 12 * sd),
                1.0, 1e-8);
  }
}

TEST(TransitionDensity, NonNegativeAndDetailedBalance) {
  RandomParams gen(12);
  for (int k = 0; k < 200; ++k) {
    const OUParams p = gen.next();
    const double y1 = 2.0 * gen.normal(), y2 = 2.0 * gen.normal(), dtau = gen.uniform(0.01, 4.0);
    const double f12 = transition_density(p, y1, y2, dtau);
    EXPECT_GE(f12, 0.0);
    const double a = stationary_density(p, y1) * f12;
    const double b = stationary_density(p, y2) * transition_density(p, y2, y1, dtau);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(a, 1e-300)) << "relative detailed-balance violation";
  }
}

TEST(TransitionDensity, ComplexOverloadMatchesRealOnRealAxis) {
  const OUParams p(1.3, 0.6, 0.9);
  for (double dtau : {1e-4, 0.3, 2.0}) {
    const Complex c = transition_density(p, 0.4, -0.2, ComplexTime::thermodynamic(dtau));
    EXPECT_NEAR(c.real(), transition_density(p, 0.4, -0.2, dtau), 1e-13);
    EXPECT_EQ(c.imag(), 0.0);
  }
}

TEST(TransitionDensity, ContinuationIsContinuousFromTheRealAxis) {
  // Walk a quarter circle from tau = 0.5 to tau = 0.5 i; consecutive values must not jump.
  const OUParams p(2.0, 2.0, 1.0);
  Complex prev = transition_density(p, 0.3, 0.7, ComplexTime::thermodynamic(0.5));
  for (int k = 1; k <= 400; ++k) {
    const double phi = 0.5 * kPi * k / 400.0;
    const Complex cur = transition_density(p, 0.3, 0.7, ComplexTime(std::polar(0.5, phi)));
    EXPECT_LT(std::abs(cur - prev), 0.02);
    prev = cur;
  }
}

TEST(TransitionDensity, SmallGammaApproachesDiffusionLimit) {
  const double r = 1.7, k_b = 0.8;
  const OUParams tiny(1e-9, r, k_b);
  for (double dtau : {0.1, 1.0, 3.0}) {
    const double exact = diffusion_limit_density(r, k_b, 0.2, 0.9, dtau);
    EXPECT_NEAR(transition_density(tiny, 0.2, 0.9, dtau) / exact, 1.0, 1e-7);
    EXPECT_NEAR(transition_density(OUParams::free_diffusion(r, k_b), 0.2, 0.9, dtau), exact, 1e-15 * exact);
  }
}

TEST(SamplePath, DeterministicGivenSeed) {
  const OUParams p(1.0, 2.0, 1.0);
  std::vector<double> times;
  for (int k = 0; k < 100; ++k) times.push_back(0.05 * k * k);
  const PathSample a = sample_path(p, StationaryStart{}, times, 123, 5);
  const PathSample b = sample_path(p, StationaryStart{}, times, 123, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.values, sample_path(p, StationaryStart{}, times, 124, 5).values);
  EXPECT_EQ(a.seed, 123u);
  EXPECT_EQ(a.stream, 5u);
}

TEST(SamplePath, RejectsNonMonotoneGrid) {
  const OUParams p(1.0, 1.0);
  const std::vector<double> bad{0.0, 1.0, 1.0};
  EXPECT_THROW(sample_path(p, FixedStart{0.0}, bad, 1), DomainError);
  EXPECT_THROW(sample_path(p, FixedStart{0.0}, std::vector<double>{}, 1), DomainError);
}

TEST(SamplePath, WienerLimitIncrementVariance) {
  const double r = 2.0, k_b = 1.5, step = 0.1;
  const OUParams p(1e-12, r, k_b);
  const int n = 100000;
  std::vector<double> times(n + 1);
  for (int k = 0; k <= n; ++k) times[k] = step * k;
  const PathSample path = sample_path(p, FixedStart{0.0}, times, 77);
  double sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = path.values[k + 1] - path.values[k];
    sum2 += d * d;
  }
  const double expected = 2.0 * k_b * step / r;
  EXPECT_LE(std::abs(sum2 / n - expected) / (expected * std::sqrt(2.0 / n)), 4.0);
}

TEST(SamplePath, StationaryStartMoments) {
  const OUParams p(2.5, 1.0, 1.2);
  const std::vector<double> times{0.0, 0.7};
  const int n = 100000;
  for (int idx : {0, 1}) {
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double y = sample_path(p, StationaryStart{}, times, 31, i).values[idx];
      sum += y;
      sum2 += y * y;
    }
    const double var = p.stationary_variance();
    EXPECT_LE(std::abs(sum / n) / std::sqrt(var / n), 4.0);
    EXPECT_LE(std::abs(sum2 / n - var) / (var * std::sqrt(2.0 / n)), 4.0);
  }
}

TEST(SamplePath, LagAutocorrelationAlongOneTrajectory) {
  const OUParams p(1.0, 1.0, 1.0);
  const double step = 0.25;
  const int n = 100000;
  std::vector<double> times(n);
  for (int k = 0; k < n; ++k) times[k] = step * k;
  const PathSample path = sample_path(p, StationaryStart{}, times, 5);
  const double phi = std::exp(-p.gamma() * step);
  for (int lag : {1, 2, 4}) {
    double num = 0, den = 0;
    for (int k = 0; k + lag < n; ++k) num += path.values[k] * path.values[k + lag];
    for (int k = 0; k < n; ++k) den += path.values[k] * path.values[k];
    const double rho_hat = num / den;
    const double rho = std::pow(phi, lag);
    // Bartlett variance for an AR(1) sequence.
    const double var = ((1 + phi * phi) * (1 - std::pow(phi, 2 * lag)) / (1 - phi * phi) - 2 * lag * std::pow(phi, 2 * lag)) / n;
    EXPECT_LE(std::abs(rho_hat - rho) / std::sqrt(var), 4.0) << "lag " << lag;
  }
}

TEST(JointDensity, SmallCases) {
  const OUParams p(1.4, 0.8, 1.1);
  EXPECT_EQ(joint_density(p, GateSequence({0.3}, {0.2})), stationary_density(p, 0.2));
  EXPECT_EQ(joint_density(p, GateSequence({0.3, 0.8}, {0.2, -0.4})),
            stationary_density(p, 0.2) * transition_density(p, 0.2, -0.4, 0.5));
}

TEST(JointDensity, MatchesMultivariateGaussianOracle) {
  RandomParams gen(13);
  for (int k = 0; k < 20; ++k) {
    const OUParams p = gen.next();
    for (int n : {3, 4}) {
      std::vector<double> t{gen.uniform(-1.0, 1.0)}, y;
      for (int j = 1; j < n; ++j) t.push_back(t.back() + gen.uniform(0.02, 1.5) / p.gamma());
      for (int j = 0; j < n; ++j) y.push_back(std::sqrt(p.stationary_variance()) * gen.normal());
      Eigen::MatrixXd cov(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cov(i, j) = p.k_b() / p.s() * std::exp(-p.gamma() * std::abs(t[i] - t[j]));
      const double expected = oracle::mvn_density(cov, Eigen::Map<Eigen::VectorXd>(y.data(), n));
      const GateSequence gates(t, y);
      EXPECT_LE(std::abs(joint_density(p, gates) - expected) / expected, 1e-10);
      EXPECT_LE(std::abs(gaussian_process_density(p, gates) - expected) / expected, 1e-10);
    }
  }
}

TEST(JointDensity, MarginalizingMiddleGateGivesTwoGateDensity) {
  const OUParams p(1.2, 0.9, 0.7);
  const double y1 = 0.4, y3 = -0.3;
  const double sd = std::sqrt(p.stationary_variance());
  const double integral = oracle::integrate(
      [&](double y2) { return joint_density(p, GateSequence({0.0, 0.5, 1.3}, {y1, y2, y3})); }, -14 * sd, 14 * sd);
  EXPECT_NEAR(integral, joint_density(p, GateSequence({0.0, 1.3}, {y1, y3})), 1e-6);
}

TEST(JointDensity, StationaryUnderTimeShift) {
  const OUParams p(1.0, 1.0);
  const GateSequence g({0.0, 0.4, 1.0}, {0.1, 0.3, -0.2});
  EXPECT_NEAR(joint_density(p, g), joint_density(p, g.shifted(5.0)), 1e-15);
}

TEST(MarkovCheck, ChapmanKolmogorovHoldsForRandomParameters) {
  RandomParams gen(14);
  for (int k = 0; k < 20; ++k) {
    const OUParams p = gen.next();
    const double sd = std::sqrt(p.stationary_variance());
    const GateSequence gates({0.0, 0.3, 1.0}, {-sd, 0.2 * sd, 1.1 * sd});
    const MarkovCheck check = markov_check(p, gates, 1e-6);
    EXPECT_TRUE(check.passed) << check.residual;
    EXPECT_EQ(check.points, 9u);
  }
}

TEST(MarkovCheck, MemorylessFactors) {
  const OUParams p(1.0, 2.0);
  const double gap = 50.0 / p.gamma();
  const GateSequence gates({0.0, gap, 2 * gap}, {-0.5, 0.0, 0.8});
  EXPECT_LT(markov_check(p, gates, 1e-8).residual, 1e-8);
}

TEST(MarkovCheck, DetectsPerturbedKernel) {
  const OUParams p(1.0, 1.0);
  const OUParams off(1.0 * (1 + 1e-3), 1.0);  // gamma perturbed by 1e-3 relative
  double worst = 0.0;
  for (double y1 : {-1.0, 0.5, 1.5}) {
    for (double y3 : {-1.0, 0.5, 1.5}) {
      worst = std::max(worst, chapman_kolmogorov_residual(p, off, p, y1, y3, 0.0, 0.3, 1.0));
    }
  }
  EXPECT_GT(worst, 1e-5);  // >> the 1e-6 tolerance... and >> the 1e-15 level of the true composition
  EXPECT_THROW(markov_check(p, GateSequence({0.0, 1.0}, {0.0, 0.0}), 1e-6), DomainError);
}

TEST(EstimateCumulative, TrivialGates) {
  const OUParams p(1.0, 1.0);
  const auto always = estimate_cumulative(p, GateSequence({0.0}, {1e6}), 5000, 1);
  EXPECT_EQ(always.estimate, 1.0);
  const auto half = estimate_cumulative(p, GateSequence({0.0}, {0.0}), 100000, 2);
  EXPECT_LE(std::abs(half.estimate - 0.5) / half.standard_error, 4.0);
  EXPECT_EQ(half.n_samples, 100000u);
  EXPECT_EQ(half.seed, 2u);
  EXPECT_THROW(estimate_cumulative(p, GateSequence({0.0}, {0.0}), 999, 1), DomainError);
}

TEST(EstimateCumulative, StationaryUnderTimeShift) {
  const OUParams p(1.5, 1.0, 1.0);
  const GateSequence gates({0.0, 0.3, 1.2}, {0.4, 0.9, 0.1});
  const auto a = estimate_cumulative(p, gates, 100000, 100);
  const auto b = estimate_cumulative(p, gates.shifted(5.0), 100000, 200);
  EXPECT_LE(std::abs(a.estimate - b.estimate) / std::hypot(a.standard_error, b.standard_error), 4.0);
}
