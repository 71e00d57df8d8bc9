#ifndef THERMOQM_THERMOQM_HPP
#define THERMOQM_THERMOQM_HPP

#include "thermoqm/correspondence.hpp"
#include "thermoqm/ou_process.hpp"
#include "thermoqm/path_integral.hpp"
#include "thermoqm/quadrature.hpp"
#include "thermoqm/quantum_kernels.hpp"
#include "thermoqm/random.hpp"
#include "thermoqm/thermo_core.hpp"
#include "thermoqm/types.hpp"

#endif  // THERMOQM_THERMOQM_HPP
