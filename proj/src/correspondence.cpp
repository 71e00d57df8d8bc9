#include "thermoqm/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "thermoqm/path_integral.hpp"

namespace thermoqm {
namespace {

constexpr double kDictionaryTol = 1e-12;
constexpr double kCausticExclusion = 1e-6;

void require_harmonic_window(double omega_t) {
  const double k = std::round(omega_t / kPi);
  if (std::abs(omega_t - k * kPi) <= kCausticExclusion) {
    throw CausticError("correspondence: omega t within 1e-6 of a multiple of pi");
  }
}

bool close(double a, double b) { return std::abs(a - b) <= kDictionaryTol * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

QuantumParams map_to_quantum(const OUParams& p, double hbar) {
  if (p.is_free_diffusion()) return map_to_free_particle(p.r(), p.k_b(), hbar);
  return {hbar * p.s() / (2.0 * p.k_b() * p.gamma()), p.gamma(), hbar};
}

OUParams map_to_thermo(const QuantumParams& q, double k_b) {
  if (q.omega() == 0.0) return OUParams::free_diffusion(2.0 * k_b * q.m() / q.hbar(), k_b);
  const double s = 2.0 * k_b * q.m() * q.omega() / q.hbar();
  return {s, s / q.omega(), k_b};
}

QuantumParams map_to_free_particle(double r, double k_b, double hbar) { return {hbar * r / (2.0 * k_b), 0.0, hbar}; }

DictionaryMap::DictionaryMap(const OUParams& thermo, double hbar, double conversion)
    : thermo_(thermo), quantum_(map_to_quantum(thermo, hbar)), conversion_(conversion) {
  if (!(conversion > 0.0)) throw DomainError("DictionaryMap: conversion factor must be positive");
}

DictionaryMap::DictionaryMap(const OUParams& thermo, const QuantumParams& quantum, double conversion)
    : thermo_(thermo), quantum_(quantum), conversion_(conversion) {
  if (!(conversion > 0.0)) throw DomainError("DictionaryMap: conversion factor must be positive");
  if (!close(quantum.omega(), thermo.gamma())) throw DomainError("DictionaryMap: omega != gamma");
  if (!close(thermo.s() / (2.0 * thermo.k_b()), quantum.m() * quantum.omega() / quantum.hbar())) {
    throw DomainError("DictionaryMap: s / 2k_b != m omega / hbar");
  }
  if (!close(thermo.r(), 2.0 * thermo.k_b() * quantum.m() / quantum.hbar())) {
    throw DomainError("DictionaryMap: r != 2 k_b m / hbar");
  }
}

Complex free_correspondence_ratio(double r, double k_b, double hbar, double x1, double x2, double t) {
  const QuantumParams q = map_to_free_particle(r, k_b, hbar);
  return free_propagator(q, x1, x2, t) / diffusion_limit_density(r, k_b, x1, x2, ComplexTime::mechanical(t));
}

FreeCorrespondence verify_free(double r, double k_b, double hbar, std::span<const double> xs,
                               std::span<const double> ts) {
  const QuantumParams q = map_to_free_particle(r, k_b, hbar);
  struct Point {
    Complex kernel;
    Complex density;
  };
  std::vector<Point> points;
  for (double t : ts) {
    if (t == 0.0) throw DomainError("verify_free: t = 0");
    for (double x1 : xs) {
      for (double x2 : xs) {
        points.push_back({free_propagator(q, x1, x2, t), diffusion_limit_density(r, k_b, x1, x2, ComplexTime::mechanical(t))});
      }
    }
  }
  Complex num{};
  double den = 0.0;
  for (const auto& pt : points) {
    num += std::conj(pt.density) * pt.kernel;
    den += std::norm(pt.density);
  }
  const Complex c = num / den;
  double worst = 0.0;
  for (const auto& pt : points) worst = std::max(worst, std::abs(pt.kernel - c * pt.density) / std::abs(pt.kernel));
  return {c, worst, points.size()};
}

HarmonicIdentity harmonic_identity(const OUParams& p, double hbar, double x1, double x2, double t, Normalization norm) {
  const QuantumParams q = map_to_quantum(p, hbar);
  const double wt = q.omega() * t;
  require_harmonic_window(wt);

  HarmonicIdentity id{};
  id.lhs = transition_density(p, x1, x2, ComplexTime::mechanical(t));
  id.amplitude = 1.0;
  if (norm == Normalization::printed) {
    // Printed prefactor / normalized prefactor = sqrt(s / k_b).
    id.lhs *= std::sqrt(p.s() / p.k_b());
    id.amplitude = std::sqrt(2.0 * q.m() * q.omega() / q.hbar());
  }
  id.propagator = harmonic_propagator(q, x1, x2, t);
  id.phase = std::exp(0.5 * kI * wt);
  id.boundary = std::exp(-(q.potential(x2) - q.potential(x1)) / (q.hbar() * q.omega()));
  return id;
}

Complex verify_harmonic(const OUParams& p, double hbar, double x1, double x2, double t, Normalization norm) {
  const HarmonicIdentity id = harmonic_identity(p, hbar, x1, x2, t, norm);
  return id.lhs - id.rhs();
}

double verify_harmonic_grid(const OUParams& p, double hbar, std::span<const double> xs,
                            std::span<const double> omega_ts, Normalization norm) {
  double worst = 0.0;
  for (double wt : omega_ts) {
    for (double x1 : xs) {
      for (double x2 : xs) {
        worst = std::max(worst, harmonic_identity(p, hbar, x1, x2, wt / p.gamma(), norm).relative_residual());
      }
    }
  }
  return worst;
}

double born_log_ratio_deviation(const OUParams& p, const QuantumParams& q, std::span<const double> xs) {
  if (xs.empty()) throw DomainError("born_log_ratio_deviation: empty grid");
  std::vector<double> log_ratio;
  log_ratio.reserve(xs.size());
  for (double x : xs) {
    // log of stationary density minus log |psi0|^2, both exponents taken analytically
    // so the check is not limited by underflow in the tails.
    const double log_stationary = 0.5 * std::log(p.s() / (2.0 * kPi * p.k_b())) - p.s() * x * x / (2.0 * p.k_b());
    const double log_ground = -q.m() * q.omega() * x * x / q.hbar();
    log_ratio.push_back(log_stationary - log_ground);
  }
  double mean = 0.0;
  for (double v : log_ratio) mean += v;
  mean /= static_cast<double>(log_ratio.size());
  double worst = 0.0;
  for (double v : log_ratio) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

double verify_stationary_born(const OUParams& p, double hbar) {
  const double sd = std::sqrt(p.stationary_variance());
  std::vector<double> xs;
  for (int k = -30; k <= 30; ++k) xs.push_back(0.1 * k * sd);
  return born_log_ratio_deviation(p, map_to_quantum(p, hbar), xs);
}

ActionEntropyReport verify_action_entropy(const DictionaryMap& map, double x1, double x2, double t, int n_slices) {
  const OUParams& p = map.thermo();
  const QuantumParams& q = map.quantum();
  if (t == 0.0) throw DomainError("verify_action_entropy: t = 0");
  if (!p.is_free_diffusion()) require_harmonic_window(q.omega() * t);
  const Complex tau = kI * t;

  ActionEntropyReport report{};
  const Complex thermo_exponent = -extremal_action(p, x1, x2, tau);
  const Complex mech_exponent = kI * classical_action(q, x1, x2, t) / q.hbar();
  report.exponent_residual = std::abs(thermo_exponent - mech_exponent);

  if (p.is_free_diffusion()) {
    const Complex kernel = free_propagator(q, x1, x2, t);
    report.density_residual =
        std::abs(transition_density(p, x1, x2, ComplexTime::mechanical(t)) - kernel) / std::abs(kernel);
  } else {
    report.density_residual =
        harmonic_identity(p, q.hbar(), x1, x2, t, Normalization::normalized).relative_residual();
  }

  const DiscretePath<Complex> path = stationary_path(p, x1, x2, tau, n_slices);
  report.discrete_residual = std::abs(discrete_action(p, path) - extremal_action(p, x1, x2, tau));
  return report;
}

}  // namespace thermoqm
