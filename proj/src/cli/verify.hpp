#ifndef THERMOQM_CLI_VERIFY_HPP
#define THERMOQM_CLI_VERIFY_HPP

#include <string>
#include <vector>

#include "cli/config.hpp"

namespace thermoqm::cli {

struct IdentityResult {
  std::string name;
  std::string description;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  double seconds = 0.0;
  Json details = Json::object();
};

/// Runs every process and correspondence check configured in `doc`
/// (blocks "thermo", "ou", "quantum", "verify").
std::vector<IdentityResult> run_verification_suite(const Json& doc);

Json to_json(const IdentityResult& result);

}  // namespace thermoqm::cli

#endif  // THERMOQM_CLI_VERIFY_HPP
