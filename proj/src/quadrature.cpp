#include "thermoqm/quadrature.hpp"

#include <algorithm>

namespace thermoqm::quadrature {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

// Bisection driven by an absolute error target; relative control breaks down
// on panels where an oscillatory integrand nearly cancels.
template <class F>
Complex integrate_absolute(const F& f, double a, double b, double abs_tol, int depth) {
  double error = 0.0;
  const Complex value = Kronrod::integrate(f, a, b, 0, 0.0, &error);
  if (error <= abs_tol) return value;
  if (depth == 0) {
    throw QuadratureError("rotated contour quadrature: no convergence on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  const double mid = 0.5 * (a + b);
  return integrate_absolute(f, a, mid, 0.5 * abs_tol, depth - 1) + integrate_absolute(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace

Complex rotated_line_integral_at(const std::function<Complex(Complex)>& f, double angle) {
  const Complex direction = std::polar(1.0, angle);
  auto along = [&](double u) { return f(direction * u); };

  // Grow the window until both ends are negligible against the peak seen so far.
  double peak = std::abs(along(0.0));
  double half_width = 4.0;
  for (;; half_width *= 1.5) {
    for (double u = -half_width; u <= half_width; u += half_width / 64.0) peak = std::max(peak, std::abs(along(u)));
    const double edge = std::max(std::abs(along(half_width)), std::abs(along(-half_width)));
    if (edge <= 1e-18 * peak) break;
    if (half_width > 1e5) throw QuadratureError("rotated integrand does not decay along the contour");
  }

  const int panels = static_cast<int>(std::ceil(2.0 * half_width / 0.5));
  const double width = 2.0 * half_width / panels;
  const double panel_tol = 1e-13 * std::max(peak, 1e-300) * width;
  Complex total{};
  for (int k = 0; k < panels; ++k) {
    const double a = -half_width + k * width;
    total += integrate_absolute(along, a, a + width, panel_tol, 30);
  }
  return direction * total;
}

Complex rotated_line_integral(const std::function<Complex(Complex)>& f, double base_angle) {
  const Complex i1 = rotated_line_integral_at(f, base_angle);
  const Complex i2 = rotated_line_integral_at(f, 2.0 * base_angle);
  const Complex i3 = rotated_line_integral_at(f, 3.0 * base_angle);
  // Quadratic through (theta, 2 theta, 3 theta) evaluated at 0.
  return 3.0 * i1 - 3.0 * i2 + i3;
}

}  // namespace thermoqm::quadrature
