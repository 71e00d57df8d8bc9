#include "thermoqm/path_integral.hpp"

namespace thermoqm {

double thermo_lagrangian(const OUParams& p, double y, double ydot) {
  return 0.5 * p.r() * (ydot * ydot + p.gamma() * p.gamma() * y * y);
}

}  // namespace thermoqm
