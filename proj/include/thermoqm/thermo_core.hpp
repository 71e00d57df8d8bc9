#ifndef THERMOQM_THERMO_CORE_HPP
#define THERMOQM_THERMO_CORE_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "thermoqm/types.hpp"

namespace thermoqm {

/// Linear-regime thermodynamic system with N extensive variables.
///
/// The entropy is the quadratic form S = S0 - y^T s y / 2 about equilibrium,
/// fluxes and forces are related by ydot = L Y and Y = R ydot with R = L^-1.
/// `s` must be symmetric positive definite and `L` invertible; both are
/// checked once here and the inverse is cached.
class ThermoSystem {
 public:
  ThermoSystem(MatrixXd entropy_hessian, MatrixXd kinetic, double k_b = 1.0, double s0 = 0.0);

  [[nodiscard]] Eigen::Index n_vars() const { return s_.rows(); }
  /// Negative entropy Hessian at equilibrium.
  [[nodiscard]] const MatrixXd& s_matrix() const { return s_; }
  /// Kinetic coefficients L.
  [[nodiscard]] const MatrixXd& l_matrix() const { return l_; }
  /// Resistances R = L^-1.
  [[nodiscard]] const MatrixXd& r_matrix() const { return r_; }
  [[nodiscard]] double k_b() const { return k_b_; }
  [[nodiscard]] double s0() const { return s0_; }
  [[nodiscard]] const Eigen::LLT<MatrixXd>& s_cholesky() const { return s_llt_; }

 private:
  MatrixXd s_;
  MatrixXd l_;
  MatrixXd r_;
  Eigen::LLT<MatrixXd> s_llt_;
  double k_b_;
  double s0_;
};

using ThermoState = VectorXd;

double entropy(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y);

/// Y = dS/dy = -s y.
VectorXd forces(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y);

/// ydot = L Y.
VectorXd fluxes(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& forces);

/// Y = R ydot.
VectorXd forces_from_fluxes(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& fluxes);

struct ReciprocityReport {
  bool symmetric;
  double max_asymmetry;
};

ReciprocityReport check_reciprocity(const ThermoSystem& system, double tol);

/// ydot^T R ydot.
double entropy_production_rate(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& fluxes);

/// Y^T L Y; equals the flux form when Y = R ydot.
double entropy_production_rate_from_forces(const ThermoSystem& system,
                                           const Eigen::Ref<const VectorXd>& forces);

/// Normalized Gaussian with covariance k_B s^-1.
double boltzmann_density(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y);

}  // namespace thermoqm

#endif  // THERMOQM_THERMO_CORE_HPP
