#include "thermoqm/thermo_core.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

namespace thermoqm {
namespace {

void require_size(const ThermoSystem& system, Eigen::Index size, const char* what) {
  if (size != system.n_vars()) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(system.n_vars()) +
                         ", got " + std::to_string(size));
  }
}

}  // namespace

ThermoSystem::ThermoSystem(MatrixXd entropy_hessian, MatrixXd kinetic, double k_b, double s0)
    : s_(std::move(entropy_hessian)), l_(std::move(kinetic)), k_b_(k_b), s0_(s0) {
  const Eigen::Index n = s_.rows();
  if (n < 1 || s_.cols() != n) throw DimensionError("s_matrix must be square and non-empty");
  if (l_.rows() != n || l_.cols() != n) throw DimensionError("l_matrix must match s_matrix in size");
  if (!(k_b_ > 0.0) || !std::isfinite(k_b_)) throw DomainError("k_b must be positive");
  if (!s_.allFinite() || !l_.allFinite()) throw DomainError("matrices must be finite");

  const double scale = s_.cwiseAbs().maxCoeff();
  if ((s_ - s_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("s_matrix is not symmetric");
  }
  s_llt_.compute(s_);
  if (s_llt_.info() != Eigen::Success) throw DomainError("s_matrix is not positive definite");

  Eigen::FullPivLU<MatrixXd> lu(l_);
  if (!lu.isInvertible()) throw DomainError("l_matrix is singular");
  r_ = lu.inverse();
  const double residual = (r_ * l_ - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > 1e-12) throw DomainError("l_matrix too ill-conditioned: |R L - I| = " + std::to_string(residual));
}

double entropy(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y) {
  require_size(system, y.size(), "entropy");
  return system.s0() - 0.5 * y.dot(system.s_matrix() * y);
}

VectorXd forces(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y) {
  require_size(system, y.size(), "forces");
  return -(system.s_matrix() * y);
}

VectorXd fluxes(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& forces) {
  require_size(system, forces.size(), "fluxes");
  return system.l_matrix() * forces;
}

VectorXd forces_from_fluxes(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& fluxes) {
  require_size(system, fluxes.size(), "forces_from_fluxes");
  return system.r_matrix() * fluxes;
}

ReciprocityReport check_reciprocity(const ThermoSystem& system, double tol) {
  const MatrixXd& l = system.l_matrix();
  const double asym = (l - l.transpose()).cwiseAbs().maxCoeff();
  return {asym <= tol, asym};
}

double entropy_production_rate(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& fluxes) {
  require_size(system, fluxes.size(), "entropy_production_rate");
  return fluxes.dot(system.r_matrix() * fluxes);
}

double entropy_production_rate_from_forces(const ThermoSystem& system,
                                           const Eigen::Ref<const VectorXd>& forces) {
  require_size(system, forces.size(), "entropy_production_rate_from_forces");
  return forces.dot(system.l_matrix() * forces);
}

double boltzmann_density(const ThermoSystem& system, const Eigen::Ref<const VectorXd>& y) {
  require_size(system, y.size(), "boltzmann_density");
  const auto& llt = system.s_cholesky();
  const double n = static_cast<double>(system.n_vars());
  // log det s from the Cholesky factor.
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double quad = y.dot(system.s_matrix() * y);
  const double log_z = 0.5 * n * std::log(2.0 * kPi * system.k_b()) - 0.5 * log_det;
  return std::exp(-quad / (2.0 * system.k_b()) - log_z);
}

}  // namespace thermoqm
