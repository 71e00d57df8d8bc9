#include "thermoqm/quantum_kernels.hpp"

#include <algorithm>
#include <cmath>

#include "thermoqm/quadrature.hpp"

namespace thermoqm {
namespace {

void require_away_from_caustic(double phase) {
  const double k = std::round(phase / kPi);
  if (std::abs(phase - k * kPi) < 1e-9) {
    throw CausticError("harmonic propagator: omega t within 1e-9 of a multiple of pi");
  }
}

// Complex-argument forms of the kernels, used on the rotated contour.
Complex harmonic_kernel_z(const QuantumParams& q, Complex x1, Complex x2, double t) {
  if (q.omega() == 0.0) {
    const Complex dx = x2 - x1;
    return std::sqrt(q.m() / (2.0 * kPi * kI * q.hbar() * t)) * std::exp(kI * q.m() * dx * dx / (2.0 * q.hbar() * t));
  }
  const double wt = q.omega() * t;
  require_away_from_caustic(wt);
  const double sn = std::sin(wt);
  const double mw = q.m() * q.omega();
  return std::sqrt(mw / (2.0 * kPi * kI * q.hbar() * sn)) *
         std::exp(kI * mw * ((x1 * x1 + x2 * x2) * std::cos(wt) - 2.0 * x1 * x2) / (2.0 * q.hbar() * sn));
}

}  // namespace

QuantumParams::QuantumParams(double m, double omega, double hbar) : m_(m), omega_(omega), hbar_(hbar) {
  if (!(m > 0.0) || !(hbar > 0.0) || !(omega >= 0.0) || !std::isfinite(m) || !std::isfinite(omega) ||
      !std::isfinite(hbar)) {
    throw DomainError("QuantumParams: need m > 0, hbar > 0, omega >= 0");
  }
}

Amplitude free_propagator(const QuantumParams& q, double x1, double x2, double t) {
  if (t == 0.0) throw DomainError("free_propagator: t = 0");
  const double dx = x2 - x1;
  return std::sqrt(q.m() / (2.0 * kPi * kI * q.hbar() * t)) * std::exp(kI * (q.m() * dx * dx / (2.0 * q.hbar() * t)));
}

Amplitude harmonic_propagator(const QuantumParams& q, double x1, double x2, double t) {
  if (t == 0.0) throw DomainError("harmonic_propagator: t = 0");
  if (q.omega() == 0.0) return free_propagator(q, x1, x2, t);
  return harmonic_kernel_z(q, x1, x2, t);
}

double ground_state(const QuantumParams& q, double x) {
  if (q.omega() == 0.0) throw DomainError("ground_state: omega = 0 has no bound state");
  return std::exp(-q.m() * q.omega() * x * x / (2.0 * q.hbar()));
}

double normalized_ground_state(const QuantumParams& q, double x) {
  return std::pow(q.m() * q.omega() / (kPi * q.hbar()), 0.25) * ground_state(q, x);
}

double classical_action(const QuantumParams& q, double x1, double x2, double t) {
  if (t == 0.0) throw DomainError("classical_action: t = 0");
  if (q.omega() == 0.0) return q.m() * (x2 - x1) * (x2 - x1) / (2.0 * t);
  const double wt = q.omega() * t;
  require_away_from_caustic(wt);
  return q.m() * q.omega() / (2.0 * std::sin(wt)) * ((x1 * x1 + x2 * x2) * std::cos(wt) - 2.0 * x1 * x2);
}

Amplitude build_wavefunction(double entropy, double action, double k_b, double hbar, double z) {
  if (!(z > 0.0)) throw DomainError("build_wavefunction: normalizer Z must be positive");
  return std::exp(entropy / (2.0 * k_b)) / std::sqrt(z) * std::exp(kI * (action / hbar));
}

double group_property_residual(const QuantumParams& q, double x1, double x3, double t1, double t2) {
  auto integrand = [&](Complex x2) { return harmonic_kernel_z(q, x2, x3, t2) * harmonic_kernel_z(q, x1, x2, t1); };
  const Complex composed = quadrature::rotated_line_integral(integrand);
  return std::abs(composed - harmonic_propagator(q, x1, x3, t1 + t2));
}

double ground_state_evolution_residual(const QuantumParams& q, double t, std::span<const double> xs) {
  const double a = q.m() * q.omega() / (2.0 * q.hbar());
  const Complex phase = std::exp(-0.5 * kI * q.omega() * t);
  double worst = 0.0;
  for (double x : xs) {
    auto integrand = [&](Complex x1) { return harmonic_kernel_z(q, x1, x, t) * std::exp(-a * x1 * x1); };
    const Complex evolved = quadrature::rotated_line_integral(integrand);
    worst = std::max(worst, std::abs(evolved - phase * ground_state(q, x)));
  }
  return worst;
}

}  // namespace thermoqm
