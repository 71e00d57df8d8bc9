#ifndef THERMOQM_PATH_INTEGRAL_HPP
#define THERMOQM_PATH_INTEGRAL_HPP

#include <cmath>
#include <complex>
#include <string>

#include "thermoqm/ou_process.hpp"
#include "thermoqm/types.hpp"

namespace thermoqm {

/// Time-sliced path between fixed endpoints. `Scalar` is double for real
/// thermodynamic time, Complex for the continued (Wick-rotated) time.
template <class Scalar>
struct DiscretePath {
  double y1;
  double y2;
  Scalar dtau;
  int n_slices;
  /// Values at the n_slices - 1 interior grid points.
  Vector<Scalar> interior;
};

/// Entropy per unit time, (r/2)(ydot^2 + gamma^2 y^2).
double thermo_lagrangian(const OUParams& p, double y, double ydot);

namespace detail {

template <class Scalar>
void require_slicing(Scalar dtau, int n_slices) {
  if (n_slices < 1) throw DomainError("path slicing: n_slices must be >= 1");
  if (std::abs(dtau) == 0.0) throw DomainError("path slicing: dtau must be non-zero");
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!(dtau > 0.0)) throw DomainError("path slicing: dtau must be positive");
  }
}

/// Coefficients of the discrete action as c * sum_k [(y_{k+1}-y_k)^2 + beta (y_k + y_{k+1})^2].
template <class Scalar>
struct SliceCoefficients {
  Scalar step;  // dtau / n
  Scalar c;     // r / (4 k_b step)
  Scalar beta;  // (gamma step / 2)^2

  SliceCoefficients(const OUParams& p, Scalar dtau, int n_slices)
      : step(dtau / static_cast<double>(n_slices)),
        c(p.r() / (4.0 * p.k_b() * step)),
        beta(0.25 * p.gamma() * p.gamma() * step * step) {}
};

/// Thomas elimination for the symmetric tridiagonal system with constant
/// diagonal `diag` and off-diagonal `off`. Returns the solution; the pivots
/// are written to `pivots` (their product is the determinant).
template <class Scalar>
Vector<Scalar> solve_tridiagonal(Scalar diag, Scalar off, const Vector<Scalar>& rhs, Vector<Scalar>& pivots) {
  const Eigen::Index m = rhs.size();
  pivots.resize(m);
  Vector<Scalar> forward(m);
  Vector<Scalar> x(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    pivots[k] = k == 0 ? diag : diag - off * off / pivots[k - 1];
    if (std::abs(pivots[k]) < 1e-300) throw CausticError("path slicing: singular quadratic form");
    forward[k] = k == 0 ? rhs[k] : rhs[k] - off * forward[k - 1] / pivots[k - 1];
  }
  for (Eigen::Index k = m - 1; k >= 0; --k) {
    x[k] = (forward[k] - (k + 1 < m ? off * x[k + 1] : Scalar{0})) / pivots[k];
  }
  return x;
}

}  // namespace detail

/// (1/2k_b) sum_k dtau_k (r/2) [((y_{k+1}-y_k)/dtau_k)^2 + gamma^2 ((y_k+y_{k+1})/2)^2]
/// on the uniform grid dtau_k = dtau / n_slices.
template <class Scalar>
Scalar discrete_action(const OUParams& p, const DiscretePath<Scalar>& path) {
  detail::require_slicing(path.dtau, path.n_slices);
  if (path.interior.size() != path.n_slices - 1) {
    throw DimensionError("discrete_action: interior must have n_slices - 1 values");
  }
  const detail::SliceCoefficients<Scalar> k(p, path.dtau, path.n_slices);
  auto node = [&](int j) -> Scalar {
    if (j == 0) return Scalar{path.y1};
    if (j == path.n_slices) return Scalar{path.y2};
    return path.interior[j - 1];
  };
  Scalar sum{0};
  for (int j = 0; j < path.n_slices; ++j) {
    const Scalar a = node(j);
    const Scalar b = node(j + 1);
    sum += (b - a) * (b - a) + k.beta * (a + b) * (a + b);
  }
  return k.c * sum;
}

/// Stationary point of `discrete_action` over the interior values (the
/// minimizer for real dtau; its analytic continuation for complex dtau).
template <class Scalar>
DiscretePath<Scalar> stationary_path(const OUParams& p, double y1, double y2, Scalar dtau, int n_slices) {
  detail::require_slicing(dtau, n_slices);
  DiscretePath<Scalar> path{y1, y2, dtau, n_slices, Vector<Scalar>(n_slices - 1)};
  if (n_slices == 1) return path;
  const detail::SliceCoefficients<Scalar> k(p, dtau, n_slices);
  const Scalar diag = 2.0 * (1.0 + k.beta);
  const Scalar off = -(1.0 - k.beta);
  Vector<Scalar> rhs = Vector<Scalar>::Zero(n_slices - 1);
  rhs[0] += (1.0 - k.beta) * y1;
  rhs[n_slices - 2] += (1.0 - k.beta) * y2;
  Vector<Scalar> pivots;
  path.interior = detail::solve_tridiagonal(diag, off, rhs, pivots);
  return path;
}

/// Time-sliced evaluation of the transition density.
///
/// Each slice carries the midpoint one-step kernel
///   (1 + gamma step / 2) sqrt(c / pi) exp(-c [(dy)^2 + beta (y_k + y_{k+1})^2]) exp(-(s/4k_b)(y_{k+1}^2 - y_k^2)),
/// which is a normalized density in y_{k+1}. The interior integrals are done
/// in closed form: determinant of the tridiagonal quadratic form from the
/// elimination pivots and the action of the stationary path. Exact for
/// gamma = 0 (Wiener kernel) at every n; converges as O(n^-2) otherwise.
template <class Scalar>
Scalar kernel_by_slicing(const OUParams& p, double y1, double y2, Scalar dtau, int n_slices) {
  detail::require_slicing(dtau, n_slices);
  const detail::SliceCoefficients<Scalar> k(p, dtau, n_slices);
  const Scalar half_step_rate = 0.5 * p.gamma() * k.step;

  Scalar log_det{0};
  DiscretePath<Scalar> path{y1, y2, dtau, n_slices, Vector<Scalar>(n_slices - 1)};
  if (n_slices > 1) {
    const Scalar diag = 2.0 * (1.0 + k.beta);
    const Scalar off = -(1.0 - k.beta);
    Vector<Scalar> rhs = Vector<Scalar>::Zero(n_slices - 1);
    rhs[0] += (1.0 - k.beta) * y1;
    rhs[n_slices - 2] += (1.0 - k.beta) * y2;
    Vector<Scalar> pivots;
    path.interior = detail::solve_tridiagonal(diag, off, rhs, pivots);
    for (Eigen::Index j = 0; j < pivots.size(); ++j) log_det += std::log(pivots[j]);
  }

  const Scalar log_kernel = static_cast<double>(n_slices) * std::log(1.0 + half_step_rate) +
                            0.5 * std::log(k.c / kPi) - 0.5 * log_det - discrete_action(p, path) -
                            (p.s() / (4.0 * p.k_b())) * (y2 * y2 - y1 * y1);
  using std::exp;
  const Scalar value = exp(log_kernel);
  if (!std::isfinite(std::abs(value)) || !std::isfinite(std::abs(log_kernel))) {
    throw RangeError("kernel_by_slicing: result out of double range (gamma dtau = " +
                     std::to_string(std::abs(p.gamma() * dtau)) + ")");
  }
  return value;
}

/// (1/2k_b) times the Onsager-Machlup action of the extremal path
///   y(tau) = [y1 sinh(gamma (T - tau)) + y2 sinh(gamma tau)] / sinh(gamma T),
/// i.e. (s / 4k_b) [(y1^2 + y2^2) coth(gamma T) - 2 y1 y2 / sinh(gamma T)].
/// For free diffusion this is r (y2 - y1)^2 / (4 k_b dtau).
template <class Scalar>
Scalar extremal_action(const OUParams& p, double y1, double y2, Scalar dtau) {
  if (p.is_free_diffusion()) return p.r() * (y2 - y1) * (y2 - y1) / (4.0 * p.k_b() * dtau);
  const Scalar z = p.gamma() * dtau;
  using std::cosh;
  using std::sinh;
  const Scalar sh = sinh(z);
  if (std::abs(sh) < 1e-12) throw CausticError("extremal_action: sinh(gamma dtau) vanishes");
  return (p.s() / (4.0 * p.k_b())) * ((y1 * y1 + y2 * y2) * cosh(z) - 2.0 * y1 * y2) / sh;
}

/// Extremal path value at intermediate time `tau` in [0, dtau].
template <class Scalar>
Scalar extremal_path(const OUParams& p, double y1, double y2, Scalar dtau, Scalar tau) {
  if (p.is_free_diffusion()) return y1 + (y2 - y1) * tau / dtau;
  using std::sinh;
  const double g = p.gamma();
  return (y1 * sinh(g * (dtau - tau)) + y2 * sinh(g * tau)) / sinh(g * dtau);
}

}  // namespace thermoqm

#endif  // THERMOQM_PATH_INTEGRAL_HPP
