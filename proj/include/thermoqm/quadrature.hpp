#ifndef THERMOQM_QUADRATURE_HPP
#define THERMOQM_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thermoqm/types.hpp"

namespace thermoqm::quadrature {

struct Options {
  double rel_tol = 1e-13;
  unsigned max_depth = 20;
  /// Error estimates above this absolute level raise QuadratureError.
  double fail_above = 1e-10;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Works for real or complex
/// valued integrands.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opts = {}) {
  double error = 0.0;
  auto value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(std::forward<F>(f), a, b,
                                                                              opts.max_depth, opts.rel_tol, &error);
  using std::abs;
  if (!(error <= opts.fail_above + opts.rel_tol * abs(value))) {
    throw QuadratureError("Gauss-Kronrod did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                          "], error estimate " + std::to_string(error));
  }
  return value;
}

/// Integral of a Gaussian-like integrand over mean +/- 10 standard deviations,
/// split into unit panels of one standard deviation.
template <class F>
auto integrate_gaussian_window(F&& f, double mean, double stddev, const Options& opts = {}) {
  using Value = decltype(f(mean));
  Value total{};
  for (int k = -10; k < 10; ++k) {
    total += integrate(f, mean + k * stddev, mean + (k + 1) * stddev, opts);
  }
  return total;
}

/// Integral of an entire, oscillatory integrand along the real axis.
///
/// The contour is rotated to z = e^{i theta} u, u real, which turns pure-phase
/// Gaussians into decaying ones. The value is computed at theta, 2 theta and
/// 3 theta and extrapolated quadratically to theta = 0. `f` must decay along
/// the rotated ray (positive imaginary quadratic coefficient for theta > 0).
Complex rotated_line_integral(const std::function<Complex(Complex)>& f, double base_angle = 1e-2);

/// Same, at a single rotation angle.
Complex rotated_line_integral_at(const std::function<Complex(Complex)>& f, double angle);

}  // namespace thermoqm::quadrature

#endif  // THERMOQM_QUADRATURE_HPP
