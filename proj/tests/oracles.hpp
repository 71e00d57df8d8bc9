// Test-only reference computations. Nothing here calls into the code paths
// these oracles check.
#ifndef THERMOQM_TESTS_ORACLES_HPP
#define THERMOQM_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// Physicists' Gauss-Hermite rule (weight e^{-x^2}) by Golub-Welsch.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    for (int k = 0; k < n; ++k) {
      nodes.push_back(eig.eigenvalues()[k]);
      const double v0 = eig.eigenvectors()(0, k);
      weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
    }
  }

  /// int f(y) dy for f close to a Gaussian of the given mean and standard deviation.
  template <class F>
  auto integrate(F&& f, double mean, double sd) const {
    using R = decltype(f(mean));
    R total{};
    const double scale = std::sqrt(2.0) * sd;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      total += weights[k] * std::exp(nodes[k] * nodes[k]) * f(mean + scale * nodes[k]) * scale;
    }
    return total;
  }
};

/// Plain adaptive Gauss-Kronrod on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, tol);
}

/// Dense multivariate normal density with zero mean.
inline double mvn_density(const Eigen::MatrixXd& cov, const Eigen::VectorXd& y) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
  const double det = lu.determinant();
  const double quad = y.dot(lu.solve(y));
  return std::exp(-0.5 * quad) / std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(y.size())) * det);
}

/// Random symmetric positive-definite matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n, double lo = 0.5, double hi = 3.0) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(lo, hi);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = eig(rng);
  Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

/// Stationary point of a quadratic action sum over slices, found by a dense
/// LDLT solve of the Hessian built from numerical second differences.
/// `action(u)` takes the interior values.
template <class F>
Eigen::VectorXd quadratic_stationary_point(F&& action, int m) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  const double a0 = action(zero);
  Eigen::VectorXd grad(m);
  Eigen::MatrixXd hess(m, m);
  // The action is exactly quadratic, so unit-step differences are exact up to rounding.
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd ei = zero;
    ei[i] = 1.0;
    const double ap = action(ei), am = action(Eigen::VectorXd(-ei));
    grad[i] = 0.5 * (ap - am);
    hess(i, i) = ap + am - 2.0 * a0;
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      Eigen::VectorXd eij = zero;
      eij[i] = 1.0;
      eij[j] = 1.0;
      const double aij = action(eij);
      Eigen::VectorXd ei = zero, ej = zero;
      ei[i] = 1.0;
      ej[j] = 1.0;
      hess(i, j) = hess(j, i) = aij - action(ei) - action(ej) + a0;
    }
  }
  return hess.ldlt().solve(-grad);
}

}  // namespace oracle

#endif  // THERMOQM_TESTS_ORACLES_HPP
