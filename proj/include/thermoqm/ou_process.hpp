#ifndef THERMOQM_OU_PROCESS_HPP
#define THERMOQM_OU_PROCESS_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "thermoqm/types.hpp"

namespace thermoqm {

/// Stationary Gaussian-Markov (Ornstein-Uhlenbeck) fluctuation of a single
/// extensive variable: entropy curvature s, resistance r, relaxation rate
/// gamma = s / r. The stationary variance is k_b / s.
///
/// `free_diffusion` is the gamma -> 0 limit taken as s -> 0 at fixed r: pure
/// diffusion with coefficient k_b / r and no stationary state.
class OUParams {
 public:
  OUParams(double s, double r, double k_b = 1.0);

  static OUParams free_diffusion(double r, double k_b = 1.0);

  [[nodiscard]] double s() const { return s_; }
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] double k_b() const { return k_b_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double stationary_variance() const;
  [[nodiscard]] bool is_free_diffusion() const { return s_ == 0.0; }

 private:
  struct FreeTag {};
  OUParams(FreeTag, double r, double k_b);

  double s_;
  double r_;
  double k_b_;
  double gamma_;
};

/// Gate positions y_k at strictly increasing instants tau_k.
class GateSequence {
 public:
  GateSequence(std::vector<double> times, std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] GateSequence shifted(double dtau) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const PathSample&, const PathSample&) = default;
};

struct FixedStart {
  double y0;
};
struct StationaryStart {};
using InitialCondition = std::variant<FixedStart, StationaryStart>;

struct TransitionMoments {
  double mean;
  double variance;
};

/// Throws DomainError for free diffusion.
double stationary_density(const OUParams& p, double y);

/// Mean e^{-gamma dtau} y1 and variance k_b (1 - e^{-2 gamma dtau}) / s of y2 given y1.
TransitionMoments transition_moments(const OUParams& p, double y1, double dtau);

/// Conditional density f1(y2, tau + dtau | y1, tau), normalized in y2.
/// Throws DomainError for dtau <= 0.
double transition_density(const OUParams& p, double y1, double y2, double dtau);

/// The same closed form continued to complex dtau with Re(gamma dtau) >= 0,
/// principal square-root branch (continuous from the positive real axis).
/// Throws DomainError for dtau = 0 or Re(dtau) < 0, CausticError within 1e-9
/// of a zero of 1 - e^{-2 gamma dtau}.
Complex transition_density(const OUParams& p, double y1, double y2, ComplexTime dtau);

/// gamma -> 0 limit at fixed r (s -> 0): Wiener kernel with diffusion k_b / r,
///   sqrt(r / (4 pi k_b dtau)) exp(-r (y2 - y1)^2 / (4 k_b dtau)).
Complex diffusion_limit_density(double r, double k_b, double y1, double y2, ComplexTime dtau);
double diffusion_limit_density(double r, double k_b, double y1, double y2, double dtau);

/// Exact sampling on an arbitrary strictly increasing grid. Deterministic in
/// (seed, stream).
PathSample sample_path(const OUParams& p, const InitialCondition& initial, std::span<const double> times,
                       std::uint64_t seed, std::uint64_t stream = 0);

/// `n_paths` paths on streams 0..n_paths-1 of one seed.
std::vector<PathSample> sample_ensemble(const OUParams& p, const InitialCondition& initial,
                                        std::span<const double> times, std::size_t n_paths, std::uint64_t seed);

/// Product of transition kernels times the stationary density of the first gate.
double joint_density(const OUParams& p, const GateSequence& gates);

/// Zero-mean multivariate Gaussian with covariance (k_b / s) e^{-gamma |tau_i - tau_j|},
/// evaluated by Cholesky factorization. Independent route to `joint_density`.
double gaussian_process_density(const OUParams& p, const GateSequence& gates);

struct MarkovCheck {
  double residual;
  bool passed;
  std::size_t points;
};

/// Max over test points of |int f(y3|y2) f(y2|y1) dy2 - f(y3|y1)|, with the
/// integral by adaptive Gauss-Kronrod. `inner` is the first factor (y1 -> y2),
/// `outer` the second (y2 -> y3), `direct` the one-step kernel.
double chapman_kolmogorov_residual(const OUParams& inner, const OUParams& outer, const OUParams& direct, double y1,
                                   double y3, double tau1, double tau2, double tau3);

/// Chapman-Kolmogorov composition over each consecutive triple of gate times,
/// at every (y_a, y_c) pair of gate values. Needs three or more gates.
MarkovCheck markov_check(const OUParams& p, const GateSequence& gates, double tol);

struct CumulativeEstimate {
  double estimate;
  double standard_error;
  std::size_t n_samples;
  std::uint64_t seed;
};

/// Monte Carlo estimate of P(y(tau_k) <= y_k for all k) from stationary-start
/// exact paths, with the binomial standard error. n_samples >= 1000.
CumulativeEstimate estimate_cumulative(const OUParams& p, const GateSequence& gates, std::size_t n_samples,
                                       std::uint64_t seed);

}  // namespace thermoqm

#endif  // THERMOQM_OU_PROCESS_HPP
