#ifndef THERMOQM_TYPES_HPP
#define THERMOQM_TYPES_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace thermoqm {

using Complex = std::complex<double>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the model's domain (non-positive constants,
/// non-monotone grids, singular kinetic matrices, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at or too close to a zero of a propagator prefactor.
class CausticError : public Error {
 public:
  using Error::Error;
};

/// Result not representable in double precision.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Time argument of a kernel. Real values are thermodynamic times tau;
/// a purely imaginary value i*t is mechanical time t reached through the
/// substitution tau -> i t.
class ComplexTime {
 public:
  constexpr ComplexTime() = default;
  constexpr explicit ComplexTime(Complex value) : value_(value) {}

  static constexpr ComplexTime thermodynamic(double tau) { return ComplexTime{Complex{tau, 0.0}}; }
  static constexpr ComplexTime mechanical(double t) { return ComplexTime{Complex{0.0, t}}; }

  [[nodiscard]] constexpr Complex value() const { return value_; }
  [[nodiscard]] constexpr double real() const { return value_.real(); }
  [[nodiscard]] constexpr double imag() const { return value_.imag(); }
  [[nodiscard]] constexpr bool is_real() const { return value_.imag() == 0.0; }

 private:
  Complex value_{};
};

}  // namespace thermoqm

#endif  // THERMOQM_TYPES_HPP
