#ifndef THERMOQM_CORRESPONDENCE_HPP
#define THERMOQM_CORRESPONDENCE_HPP

#include <span>

#include "thermoqm/ou_process.hpp"
#include "thermoqm/quantum_kernels.hpp"
#include "thermoqm/types.hpp"

namespace thermoqm {

/// Thermodynamic <-> mechanical dictionary:
///   tau <-> i t,   gamma <-> omega,   y <-> x,   s / 2k_b <-> m omega / hbar.
/// Under it r = 2 k_b m / hbar, independent of omega.
class DictionaryMap {
 public:
  /// Thermodynamic side given; the quantum side is derived.
  DictionaryMap(const OUParams& thermo, double hbar = 1.0, double conversion = 1.0);
  /// Both sides given; throws DomainError unless they satisfy the dictionary to 1e-12.
  DictionaryMap(const OUParams& thermo, const QuantumParams& quantum, double conversion = 1.0);

  [[nodiscard]] const OUParams& thermo() const { return thermo_; }
  [[nodiscard]] const QuantumParams& quantum() const { return quantum_; }
  [[nodiscard]] double conversion() const { return conversion_; }

 private:
  OUParams thermo_;
  QuantumParams quantum_;
  double conversion_;
};

/// omega = gamma, m = hbar s / (2 k_b gamma) = hbar r / (2 k_b). Free
/// diffusion maps to the free particle.
QuantumParams map_to_quantum(const OUParams& p, double hbar = 1.0);

/// Inverse of map_to_quantum: s = 2 k_b m omega / hbar, r = 2 k_b m / hbar.
/// omega = 0 gives free diffusion.
OUParams map_to_thermo(const QuantumParams& q, double k_b = 1.0);

/// gamma -> 0 branch (s -> 0 at fixed r): free particle with m = hbar r / (2 k_b).
QuantumParams map_to_free_particle(double r, double k_b = 1.0, double hbar = 1.0);

// ---------------------------------------------------------------------------
// Free particle

/// K_free / f1(it)|_{gamma -> 0} at one point, with the thermodynamic side the
/// Wiener kernel of resistance r and the free mass from map_to_free_particle.
Complex free_correspondence_ratio(double r, double k_b, double hbar, double x1, double x2, double t);

struct FreeCorrespondence {
  /// Least-squares constant c in K_free = c f1.
  Complex fitted_constant;
  /// max |K_free - c f1| / |K_free| over the grid.
  double max_residual;
  std::size_t points;
};

FreeCorrespondence verify_free(double r, double k_b, double hbar, std::span<const double> xs,
                               std::span<const double> ts);

// ---------------------------------------------------------------------------
// Harmonic oscillator

enum class Normalization {
  /// Thermodynamic density with the prefactor (1/sqrt(2 pi)) (s/k_b) / sqrt(1 - e^{-2 gamma dtau});
  /// the identity then carries the factor sqrt(2 m omega / hbar).
  printed,
  /// Normalized thermodynamic density; the identity then carries no extra factor.
  normalized,
};

struct HarmonicIdentity {
  Complex lhs;          // continued density at dtau = i t
  Complex propagator;   // K_harmonic(x2, t | x1, 0)
  Complex phase;        // exp(i omega t / 2)
  double boundary;      // exp(-dV / (hbar omega)), dV = V(x2) - V(x1)
  double amplitude;     // sqrt(2 m omega / hbar), or 1 for Normalization::normalized
  [[nodiscard]] Complex rhs() const { return phase * boundary * amplitude * propagator; }
  [[nodiscard]] double relative_residual() const { return std::abs(lhs - rhs()) / std::abs(rhs()); }
};

/// Both sides of f1(x2, it | x1, 0) = exp(i w t / 2 - dV / hbar w) sqrt(2 m w / hbar) K_harmonic.
/// Throws CausticError when omega t is within 1e-6 of a multiple of pi.
HarmonicIdentity harmonic_identity(const OUParams& p, double hbar, double x1, double x2, double t,
                                   Normalization norm = Normalization::printed);

/// lhs - rhs of the harmonic identity.
Complex verify_harmonic(const OUParams& p, double hbar, double x1, double x2, double t,
                        Normalization norm = Normalization::printed);

/// Max relative residual of the harmonic identity over xs x xs x (omega t values).
double verify_harmonic_grid(const OUParams& p, double hbar, std::span<const double> xs,
                            std::span<const double> omega_ts, Normalization norm = Normalization::printed);

// ---------------------------------------------------------------------------
// Stationary density vs ground state

/// Max deviation of log(stationary(x) / |psi0(x)|^2) from its grid mean,
/// with psi0 taken from `q` (normally map_to_quantum(p)).
double born_log_ratio_deviation(const OUParams& p, const QuantumParams& q, std::span<const double> xs);

/// born_log_ratio_deviation under the dictionary, on x in [-3, 3] in units of
/// the stationary standard deviation.
double verify_stationary_born(const OUParams& p, double hbar = 1.0);

// ---------------------------------------------------------------------------
// Action / entropy

struct ActionEntropyReport {
  /// |-(1/2k_b) A_OM(it) - i I / hbar|, closed-form extremal actions.
  double exponent_residual;
  /// |log f1(it) - [log K + i w t / 2 - dV / hbar w]|, i.e. the full density
  /// decomposes into the mechanical phase plus the boundary term and the
  /// x-independent i w t / 2 (normalized convention).
  double density_residual;
  /// |discrete action of the stationary sliced path at dtau = it - closed form|.
  double discrete_residual;
  /// max(exponent_residual, density_residual).
  [[nodiscard]] double analytic_residual() const { return std::max(exponent_residual, density_residual); }
};

ActionEntropyReport verify_action_entropy(const DictionaryMap& map, double x1, double x2, double t,
                                          int n_slices = 256);

}  // namespace thermoqm

#endif  // THERMOQM_CORRESPONDENCE_HPP
