#ifndef THERMOQM_QUANTUM_KERNELS_HPP
#define THERMOQM_QUANTUM_KERNELS_HPP

#include <span>

#include "thermoqm/types.hpp"

namespace thermoqm {

/// Mass, harmonic frequency (0 for the free particle) and Planck's constant.
class QuantumParams {
 public:
  QuantumParams(double m, double omega, double hbar = 1.0);

  [[nodiscard]] double m() const { return m_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double hbar() const { return hbar_; }
  /// V(x) = m omega^2 x^2 / 2.
  [[nodiscard]] double potential(double x) const { return 0.5 * m_ * omega_ * omega_ * x * x; }

 private:
  double m_;
  double omega_;
  double hbar_;
};

using Amplitude = Complex;

/// sqrt(m / (2 pi i hbar t)) exp(i m (x2 - x1)^2 / (2 hbar t)), principal branch.
Amplitude free_propagator(const QuantumParams& q, double x1, double x2, double t);

/// Mehler kernel
///   sqrt(m w / (2 pi i hbar sin wt)) exp[i m w ((x1^2 + x2^2) cos wt - 2 x1 x2) / (2 hbar sin wt)].
/// Throws CausticError when wt is within 1e-9 of a multiple of pi.
/// omega = 0 falls back to the free propagator.
Amplitude harmonic_propagator(const QuantumParams& q, double x1, double x2, double t);

/// exp(-m w x^2 / 2 hbar); DomainError for omega = 0.
double ground_state(const QuantumParams& q, double x);
/// (m w / pi hbar)^{1/4} exp(-m w x^2 / 2 hbar).
double normalized_ground_state(const QuantumParams& q, double x);

/// Action of the classical path from (x1, 0) to (x2, t): the free form when
/// omega = 0, the harmonic form otherwise.
double classical_action(const QuantumParams& q, double x1, double x2, double t);

/// Z^{-1/2} exp(S / 2k_b) exp(i I / hbar).
Amplitude build_wavefunction(double entropy, double action, double k_b, double hbar, double z);

/// |int K(x3, t2 | x2) K(x2, t1 | x1) dx2 - K(x3, t1 + t2 | x1)|, integral by
/// contour rotation. Uses the harmonic kernel (free when omega = 0).
double group_property_residual(const QuantumParams& q, double x1, double x3, double t1, double t2);

/// max over `xs` of |int K(x, t | x1, 0) psi0(x1) dx1 - e^{-i w t / 2} psi0(x)|.
double ground_state_evolution_residual(const QuantumParams& q, double t, std::span<const double> xs);

}  // namespace thermoqm

#endif  // THERMOQM_QUANTUM_KERNELS_HPP
