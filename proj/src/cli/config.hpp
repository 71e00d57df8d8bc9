#ifndef THERMOQM_CLI_CONFIG_HPP
#define THERMOQM_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "thermoqm/ou_process.hpp"
#include "thermoqm/thermo_core.hpp"

namespace thermoqm::cli {

using Json = nlohmann::json;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line overrides applied on top of the config document.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

struct RunConfig {
  Json doc;
  /// FNV-1a 64 of the canonical dump of `doc`, hex.
  std::string digest;
};

/// Built-in configuration; identical to config/default.json.
Json default_config();

/// Reads and parses a JSON config file. Blocks absent from the file are
/// taken from the defaults; overrides are written into the document before
/// the digest is computed.
RunConfig load_config(const std::optional<std::string>& path, const Overrides& overrides);

std::string digest_of(const Json& doc);

// Typed accessors. All throw ConfigError with the offending key on failure.
double get_number(const Json& block, const std::string& key);
double get_number_or(const Json& block, const std::string& key, double fallback);
std::uint64_t get_seed(const Json& block, const std::string& key);
std::vector<double> get_numbers(const Json& block, const std::string& key);
const Json& get_block(const Json& doc, const std::string& key);

OUParams ou_params_from(const Json& block);
ThermoSystem thermo_system_from(const Json& block);

}  // namespace thermoqm::cli

#endif  // THERMOQM_CLI_CONFIG_HPP
