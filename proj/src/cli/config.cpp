#include "cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace thermoqm::cli {

Json default_config() {
  return Json::parse(R"({
    "thermo": {
      "n_vars": 2,
      "s_matrix": [2.0, 0.5, 0.5, 1.0],
      "l_matrix": [2.0, 1.0, 1.0, 3.0],
      "k_b": 1.0,
      "s0": 0.0
    },
    "ou": {"s": 2.0, "r": 2.0, "k_b": 1.0},
    "quantum": {"hbar": 1.0},
    "verify": {
      "seed": 20121001,
      "n_random": 20,
      "n_samples": 100000,
      "tolerances": {
        "thermo.reciprocity": 1e-12,
        "thermo.forces_gradient": 1e-6,
        "thermo.production_forms": 1e-12,
        "thermo.boltzmann_normalization": 1e-8,
        "ou.normalization": 1e-8,
        "ou.chapman_kolmogorov": 1e-6,
        "ou.detailed_balance": 1e-12,
        "ou.factorization": 1e-10,
        "ou.stationary_moments": 4.0,
        "ou.autocorrelation": 4.0,
        "ou.gate_stationarity": 4.0,
        "path.free_slicing_exact": 1e-12,
        "path.slicing_convergence": 1e-3,
        "path.slicing_order": 0.5,
        "qm.group_free": 1e-6,
        "qm.group_harmonic": 1e-6,
        "qm.ground_state_evolution": 1e-6,
        "corr.bijectivity": 1e-12,
        "corr.harmonic": 1e-9,
        "corr.free": 1e-9,
        "corr.born": 1e-12,
        "corr.action_entropy_analytic": 1e-10,
        "corr.action_entropy_discrete": 1e-4,
        "corr.wavefunction_modulus": 1e-14
      }
    },
    "sample": {
      "n_paths": 100,
      "t0": 0.0,
      "dt": 0.01,
      "n_times": 1000,
      "initial": "stationary",
      "seed": 7
    },
    "converge": {
      "y1": 1.0,
      "y2": 0.5,
      "dtau": 1.0,
      "free": false,
      "n_slices": [4, 8, 16, 32, 64, 128, 256]
    },
    "kernel_eval": {
      "kind": "harmonic",
      "x1": [0.0, 0.5],
      "x2": [0.0, 0.5, 1.0],
      "t": [0.7],
      "m": 1.0,
      "omega": 1.0
    },
    "estimate_gate": {
      "times": [0.0, 0.5, 1.5],
      "values": [0.5, 1.0, 0.0],
      "n_samples": 100000,
      "seed": 11
    }
  })");
}

std::string digest_of(const Json& doc) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RunConfig load_config(const std::optional<std::string>& path, const Overrides& overrides) {
  Json doc = default_config();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file '" + *path + "'");
    Json user;
    try {
      user = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("config '" + *path + "' is not valid JSON: " + e.what());
    }
    if (!user.is_object()) throw ConfigError("config root must be a JSON object");
    // Shallow merge per block; a block present in the file replaces scalar keys
    // of the default block it names.
    for (auto& [key, value] : user.items()) {
      if (value.is_object() && doc.contains(key) && doc[key].is_object()) {
        for (auto& [k, v] : value.items()) {
          if (v.is_object() && doc[key].contains(k) && doc[key][k].is_object()) {
            doc[key][k].update(v);
          } else {
            doc[key][k] = v;
          }
        }
      } else {
        doc[key] = value;
      }
    }
  }
  if (overrides.tol) doc["verify"]["tolerance"] = *overrides.tol;
  if (overrides.seed) {
    for (const char* block : {"verify", "sample", "estimate_gate"}) doc[block]["seed"] = *overrides.seed;
  }
  return {doc, digest_of(doc)};
}

const Json& get_block(const Json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc.at(key).is_object()) throw ConfigError("missing config block '" + key + "'");
  return doc.at(key);
}

double get_number(const Json& block, const std::string& key) {
  if (!block.contains(key)) throw ConfigError("missing config key '" + key + "'");
  if (!block.at(key).is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return block.at(key).get<double>();
}

double get_number_or(const Json& block, const std::string& key, double fallback) {
  return block.contains(key) ? get_number(block, key) : fallback;
}

std::uint64_t get_seed(const Json& block, const std::string& key) {
  if (!block.contains(key)) throw ConfigError("missing seed '" + key + "'");
  if (!block.at(key).is_number_unsigned()) throw ConfigError("seed '" + key + "' must be a non-negative integer");
  return block.at(key).get<std::uint64_t>();
}

std::vector<double> get_numbers(const Json& block, const std::string& key) {
  if (!block.contains(key)) throw ConfigError("missing config key '" + key + "'");
  const Json& v = block.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) throw ConfigError("config key '" + key + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

OUParams ou_params_from(const Json& block) {
  try {
    return {get_number(block, "s"), get_number(block, "r"), get_number_or(block, "k_b", 1.0)};
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid ou block: ") + e.what());
  }
}

ThermoSystem thermo_system_from(const Json& block) {
  const double n_raw = get_number(block, "n_vars");
  if (n_raw < 1 || n_raw != static_cast<double>(static_cast<int>(n_raw))) {
    throw ConfigError("n_vars must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(n_raw);
  auto matrix = [&](const std::string& key) {
    const std::vector<double> flat = get_numbers(block, key);
    if (static_cast<Eigen::Index>(flat.size()) != n * n) {
      throw ConfigError(key + " must have n_vars^2 entries (row-major)");
    }
    return MatrixXd(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data(), n, n));
  };
  try {
    return {matrix("s_matrix"), matrix("l_matrix"), get_number_or(block, "k_b", 1.0), get_number_or(block, "s0", 0.0)};
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid thermo block: ") + e.what());
  }
}

}  // namespace thermoqm::cli
