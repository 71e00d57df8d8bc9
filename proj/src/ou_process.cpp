#include "thermoqm/ou_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "thermoqm/quadrature.hpp"
#include "thermoqm/random.hpp"

namespace thermoqm {
namespace {

void require_increasing(std::span<const double> times, const char* what) {
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw DomainError(std::string(what) + ": times must be strictly increasing (index " + std::to_string(k) + ")");
    }
  }
}

// 1 - e^{-z}, accurate for small |z|.
Complex one_minus_exp_neg(Complex z) {
  if (std::abs(z) < 1e-3) {
    // z - z^2/2 + z^3/6 - z^4/24 + z^5/120
    return z * (1.0 - z * (0.5 - z * (1.0 / 6.0 - z * (1.0 / 24.0 - z / 120.0))));
  }
  return 1.0 - std::exp(-z);
}

}  // namespace

OUParams::OUParams(double s, double r, double k_b) : s_(s), r_(r), k_b_(k_b), gamma_(s / r) {
  if (!(s > 0.0) || !(r > 0.0) || !(k_b > 0.0) || !std::isfinite(s) || !std::isfinite(r) || !std::isfinite(k_b)) {
    throw DomainError("OUParams: s, r and k_b must be positive and finite");
  }
}

OUParams::OUParams(FreeTag, double r, double k_b) : s_(0.0), r_(r), k_b_(k_b), gamma_(0.0) {
  if (!(r > 0.0) || !(k_b > 0.0) || !std::isfinite(r) || !std::isfinite(k_b)) {
    throw DomainError("OUParams::free_diffusion: r and k_b must be positive and finite");
  }
}

OUParams OUParams::free_diffusion(double r, double k_b) { return {FreeTag{}, r, k_b}; }

double OUParams::stationary_variance() const {
  if (is_free_diffusion()) throw DomainError("free diffusion has no stationary state");
  return k_b_ / s_;
}

GateSequence::GateSequence(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty()) throw DomainError("GateSequence: at least one gate required");
  if (times_.size() != values_.size()) throw DimensionError("GateSequence: times and values differ in length");
  require_increasing(times_, "GateSequence");
}

GateSequence GateSequence::shifted(double dtau) const {
  std::vector<double> t = times_;
  for (double& v : t) v += dtau;
  return {std::move(t), values_};
}

double stationary_density(const OUParams& p, double y) {
  if (p.is_free_diffusion()) throw DomainError("stationary_density: free diffusion has no stationary state");
  return std::sqrt(p.s() / (2.0 * kPi * p.k_b())) * std::exp(-p.s() * y * y / (2.0 * p.k_b()));
}

TransitionMoments transition_moments(const OUParams& p, double y1, double dtau) {
  if (p.is_free_diffusion()) return {y1, 2.0 * p.k_b() * dtau / p.r()};
  const double g = p.gamma() * dtau;
  return {std::exp(-g) * y1, -p.k_b() * std::expm1(-2.0 * g) / p.s()};
}

double transition_density(const OUParams& p, double y1, double y2, double dtau) {
  if (!(dtau > 0.0)) throw DomainError("transition_density: dtau must be positive");
  const auto [mean, var] = transition_moments(p, y1, dtau);
  const double d = y2 - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

Complex transition_density(const OUParams& p, double y1, double y2, ComplexTime dtau) {
  const Complex tau = dtau.value();
  if (tau == Complex{}) throw DomainError("transition_density: dtau = 0 is a delta function");
  if (tau.real() < 0.0) throw DomainError("transition_density: Re(dtau) < 0 is outside the continued domain");
  if (p.is_free_diffusion()) return diffusion_limit_density(p.r(), p.k_b(), y1, y2, dtau);

  const Complex z = p.gamma() * tau;
  const double k = std::round(z.imag() / kPi);
  if (k != 0.0 && std::abs(z - kI * (kPi * k)) / p.gamma() < 1e-9) {
    throw CausticError("transition_density: dtau within 1e-9 of a zero of 1 - exp(-2 gamma dtau)");
  }

  const Complex d = one_minus_exp_neg(2.0 * z);
  const Complex norm = std::sqrt(p.s() / (2.0 * kPi * p.k_b() * d));
  const Complex dev = y2 - std::exp(-z) * y1;
  return norm * std::exp(-(p.s() / (2.0 * p.k_b())) * dev * dev / d);
}

Complex diffusion_limit_density(double r, double k_b, double y1, double y2, ComplexTime dtau) {
  const Complex tau = dtau.value();
  if (tau == Complex{}) throw DomainError("diffusion_limit_density: dtau = 0 is a delta function");
  if (tau.real() < 0.0) throw DomainError("diffusion_limit_density: Re(dtau) < 0");
  const double dy = y2 - y1;
  return std::sqrt(r / (4.0 * kPi * k_b * tau)) * std::exp(-r * dy * dy / (4.0 * k_b * tau));
}

double diffusion_limit_density(double r, double k_b, double y1, double y2, double dtau) {
  if (!(dtau > 0.0)) throw DomainError("diffusion_limit_density: dtau must be positive");
  const double dy = y2 - y1;
  return std::sqrt(r / (4.0 * kPi * k_b * dtau)) * std::exp(-r * dy * dy / (4.0 * k_b * dtau));
}

PathSample sample_path(const OUParams& p, const InitialCondition& initial, std::span<const double> times,
                       std::uint64_t seed, std::uint64_t stream) {
  if (times.empty()) throw DomainError("sample_path: empty time grid");
  require_increasing(times, "sample_path");

  CounterRng rng(seed, stream);
  PathSample path{{times.begin(), times.end()}, std::vector<double>(times.size()), seed, stream};
  path.values[0] = std::visit(
      [&](const auto& start) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(start)>, FixedStart>) {
          return start.y0;
        } else {
          return std::sqrt(p.stationary_variance()) * rng.normal();
        }
      },
      initial);

  for (std::size_t k = 1; k < times.size(); ++k) {
    const auto [mean, var] = transition_moments(p, path.values[k - 1], times[k] - times[k - 1]);
    path.values[k] = mean + std::sqrt(var) * rng.normal();
  }
  return path;
}

std::vector<PathSample> sample_ensemble(const OUParams& p, const InitialCondition& initial,
                                        std::span<const double> times, std::size_t n_paths, std::uint64_t seed) {
  std::vector<PathSample> paths;
  paths.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) paths.push_back(sample_path(p, initial, times, seed, i));
  return paths;
}

double joint_density(const OUParams& p, const GateSequence& gates) {
  const auto& t = gates.times();
  const auto& y = gates.values();
  double density = stationary_density(p, y[0]);
  for (std::size_t k = 1; k < gates.size(); ++k) density *= transition_density(p, y[k - 1], y[k], t[k] - t[k - 1]);
  return density;
}

double gaussian_process_density(const OUParams& p, const GateSequence& gates) {
  const auto n = static_cast<Eigen::Index>(gates.size());
  MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cov(i, j) = p.stationary_variance() * std::exp(-p.gamma() * std::abs(gates.times()[i] - gates.times()[j]));
    }
  }
  const Eigen::LLT<MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw DomainError("gaussian_process_density: covariance not positive definite");
  const VectorXd y = Eigen::Map<const VectorXd>(gates.values().data(), n);
  const VectorXd w = llt.matrixL().solve(y);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return std::exp(-0.5 * w.squaredNorm() - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * kPi));
}

double chapman_kolmogorov_residual(const OUParams& inner, const OUParams& outer, const OUParams& direct, double y1,
                                   double y3, double tau1, double tau2, double tau3) {
  const auto [mean, var] = transition_moments(inner, y1, tau2 - tau1);
  auto integrand = [&](double y2) {
    return transition_density(outer, y2, y3, tau3 - tau2) * transition_density(inner, y1, y2, tau2 - tau1);
  };
  quadrature::Options opts;
  opts.rel_tol = 1e-12;
  const double composed = quadrature::integrate_gaussian_window(integrand, mean, std::sqrt(var), opts);
  return std::abs(composed - transition_density(direct, y1, y3, tau3 - tau1));
}

MarkovCheck markov_check(const OUParams& p, const GateSequence& gates, double tol) {
  if (gates.size() < 3) throw DomainError("markov_check: three or more gate times required");
  const auto& t = gates.times();
  const auto& y = gates.values();
  double worst = 0.0;
  std::size_t points = 0;
  for (std::size_t k = 0; k + 2 < gates.size(); ++k) {
    for (double ya : y) {
      for (double yc : y) {
        worst = std::max(worst, chapman_kolmogorov_residual(p, p, p, ya, yc, t[k], t[k + 1], t[k + 2]));
        ++points;
      }
    }
  }
  return {worst, worst <= tol, points};
}

CumulativeEstimate estimate_cumulative(const OUParams& p, const GateSequence& gates, std::size_t n_samples,
                                       std::uint64_t seed) {
  if (n_samples < 1000) throw DomainError("estimate_cumulative: n_samples must be at least 1000");
  const auto& t = gates.times();
  const auto& y = gates.values();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const PathSample path = sample_path(p, StationaryStart{}, t, seed, i);
    bool below = true;
    for (std::size_t k = 0; k < gates.size() && below; ++k) below = path.values[k] <= y[k];
    hits += below ? 1 : 0;
  }
  const double n = static_cast<double>(n_samples);
  const double est = static_cast<double>(hits) / n;
  return {est, std::sqrt(est * (1.0 - est) / n), n_samples, seed};
}

}  // namespace thermoqm
