#include "cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli/verify.hpp"
#include "thermoqm/thermoqm.hpp"

namespace thermoqm::cli {
namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes `text` to the destination; throws ConfigError when the file cannot be written.
void emit(const Destination& dest, const std::string& text, std::ostream& out) {
  if (!dest.path) {
    out << text;
    return;
  }
  std::ofstream file(*dest.path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write output file '" + *dest.path + "'");
  file << text;
  if (!file.flush()) throw ConfigError("failed writing output file '" + *dest.path + "'");
}

/// CSV outputs keep their exact columns; reproducibility metadata goes next to them.
void emit_csv_metadata(const Destination& dest, const RunConfig& config, const Json& extra) {
  if (!dest.path) return;
  Json meta = extra;
  meta["config_digest"] = config.digest;
  emit(Destination{*dest.path + ".meta.json"}, meta.dump(2) + "\n", std::cout);
}

std::optional<std::string> out_path(const Destination& dest, const Json& block) {
  if (dest.path) return dest.path;
  if (block.contains("out")) {
    if (!block.at("out").is_string()) throw ConfigError("'out' must be a string path");
    return block.at("out").get<std::string>();
  }
  return std::nullopt;
}

}  // namespace

int cmd_verify_all(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err) {
  const std::vector<IdentityResult> results = run_verification_suite(config.doc);
  Json report;
  report["subcommand"] = "verify-all";
  report["config_digest"] = config.digest;
  report["seed"] = config.doc.at("verify").at("seed");
  bool all = true;
  Json entries = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    entries.push_back(to_json(r));
    err << (r.passed ? "PASS " : "FAIL ") << r.name << "  residual=" << format_number(r.residual)
        << "  tol=" << format_number(r.tolerance) << "\n";
  }
  report["passed"] = all;
  report["identities"] = entries;
  report["config"] = config.doc;
  emit(Destination{out_path(dest, config.doc.at("verify"))}, report.dump(2) + "\n", out);
  return all ? kSuccess : kVerificationFailure;
}

int cmd_sample(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream&) {
  const Json& block = get_block(config.doc, "sample");
  const OUParams p = ou_params_from(block.contains("ou") ? block.at("ou") : get_block(config.doc, "ou"));
  const double n_paths_raw = get_number(block, "n_paths");
  const double n_times_raw = get_number(block, "n_times");
  if (n_paths_raw < 1 || n_times_raw < 1) throw ConfigError("sample: n_paths and n_times must be >= 1");
  const auto n_paths = static_cast<std::size_t>(n_paths_raw);
  const auto n_times = static_cast<std::size_t>(n_times_raw);
  const double t0 = get_number_or(block, "t0", 0.0);
  const double dt = get_number(block, "dt");
  if (!(dt > 0.0)) throw ConfigError("sample: dt must be positive");
  const std::uint64_t seed = get_seed(block, "seed");

  InitialCondition initial = StationaryStart{};
  if (block.contains("initial")) {
    const Json& init = block.at("initial");
    if (init.is_number()) {
      initial = FixedStart{init.get<double>()};
    } else if (!(init.is_string() && init.get<std::string>() == "stationary")) {
      throw ConfigError("sample.initial must be \"stationary\" or a number");
    }
  }

  std::vector<double> times(n_times);
  for (std::size_t k = 0; k < n_times; ++k) times[k] = t0 + dt * static_cast<double>(k);

  std::string csv = "path_id,time,value\n";
  csv.reserve(n_paths * n_times * 40);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const PathSample path = sample_path(p, initial, times, seed, i);
    const std::string id = std::to_string(i);
    for (std::size_t k = 0; k < n_times; ++k) {
      csv += id;
      csv += ',';
      csv += format_number(path.times[k]);
      csv += ',';
      csv += format_number(path.values[k]);
      csv += '\n';
    }
  }
  const Destination target{out_path(dest, block)};
  emit(target, csv, out);
  emit_csv_metadata(target, config,
                    {{"subcommand", "sample"}, {"seed", seed}, {"n_paths", n_paths}, {"n_times", n_times}});
  return kSuccess;
}

int cmd_converge(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream&) {
  const Json& block = get_block(config.doc, "converge");
  const OUParams base = ou_params_from(block.contains("ou") ? block.at("ou") : get_block(config.doc, "ou"));
  const bool free = block.value("free", false);
  const OUParams p = free ? OUParams::free_diffusion(base.r(), base.k_b()) : base;
  const double y1 = get_number(block, "y1");
  const double y2 = get_number(block, "y2");
  const double dtau = get_number(block, "dtau");
  if (!(dtau > 0.0)) throw ConfigError("converge: dtau must be positive");
  const std::vector<double> ns = get_numbers(block, "n_slices");
  if (ns.empty()) throw ConfigError("converge: n_slices list is empty");

  const double exact = transition_density(p, y1, y2, dtau);
  std::string csv = "n_slices,value,reference,rel_error\n";
  for (double n_raw : ns) {
    if (n_raw < 1 || n_raw != static_cast<double>(static_cast<int>(n_raw))) {
      throw ConfigError("converge: n_slices entries must be positive integers");
    }
    const int n = static_cast<int>(n_raw);
    const double value = kernel_by_slicing(p, y1, y2, dtau, n);
    csv += std::to_string(n) + "," + format_number(value) + "," + format_number(exact) + "," +
           format_number(std::abs(value - exact) / exact) + "\n";
  }
  const Destination target{out_path(dest, block)};
  emit(target, csv, out);
  emit_csv_metadata(target, config, {{"subcommand", "converge"}, {"seed", nullptr}});
  return kSuccess;
}

int cmd_kernel_eval(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream&) {
  const Json& block = get_block(config.doc, "kernel_eval");
  const std::string kind = block.value("kind", std::string("harmonic"));
  const double hbar = get_number_or(get_block(config.doc, "quantum"), "hbar", 1.0);
  const std::vector<double> x1s = get_numbers(block, "x1");
  const std::vector<double> x2s = get_numbers(block, "x2");
  const std::vector<double> ts = get_numbers(block, "t");

  Json params;
  std::function<Complex(double, double, double)> kernel;
  if (kind == "free" || kind == "harmonic") {
    const QuantumParams q(get_number(block, "m"), kind == "free" ? 0.0 : get_number(block, "omega"), hbar);
    params = {{"m", q.m()}, {"omega", q.omega()}, {"hbar", q.hbar()}};
    if (kind == "free") {
      kernel = [q](double x1, double x2, double t) { return free_propagator(q, x1, x2, t); };
    } else {
      kernel = [q](double x1, double x2, double t) { return harmonic_propagator(q, x1, x2, t); };
    }
  } else if (kind == "transition" || kind == "continued") {
    const OUParams p = ou_params_from(block.contains("ou") ? block.at("ou") : get_block(config.doc, "ou"));
    params = {{"s", p.s()}, {"r", p.r()}, {"k_b", p.k_b()}, {"gamma", p.gamma()}};
    const bool continued = kind == "continued";
    kernel = [p, continued](double x1, double x2, double t) {
      return transition_density(p, x1, x2, continued ? ComplexTime::mechanical(t) : ComplexTime::thermodynamic(t));
    };
  } else {
    throw ConfigError("kernel_eval.kind must be one of free, harmonic, transition, continued");
  }

  Json records = Json::array();
  for (double t : ts) {
    for (double x1 : x1s) {
      for (double x2 : x2s) {
        const Complex k = kernel(x1, x2, t);
        records.push_back({{"re", k.real()}, {"im", k.imag()}, {"x1", x1}, {"x2", x2}, {"t", t}, {"kind", kind},
                           {"params", params}});
      }
    }
  }
  Json report = {{"subcommand", "kernel-eval"}, {"config_digest", config.digest}, {"seed", nullptr},
                 {"records", records}};
  emit(Destination{out_path(dest, block)}, report.dump(2) + "\n", out);
  return kSuccess;
}

int cmd_estimate_gate(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream&) {
  const Json& block = get_block(config.doc, "estimate_gate");
  const OUParams p = ou_params_from(block.contains("ou") ? block.at("ou") : get_block(config.doc, "ou"));
  const double n_raw = get_number(block, "n_samples");
  if (n_raw < 1000) throw ConfigError("estimate_gate: n_samples must be >= 1000");
  GateSequence gates({0.0}, {0.0});
  try {
    gates = GateSequence(get_numbers(block, "times"), get_numbers(block, "values"));
  } catch (const Error& e) {
    throw ConfigError(std::string("estimate_gate: ") + e.what());
  }
  const CumulativeEstimate est = estimate_cumulative(p, gates, static_cast<std::size_t>(n_raw), get_seed(block, "seed"));
  Json report = {{"subcommand", "estimate-gate"},
                 {"config_digest", config.digest},
                 {"estimate", est.estimate},
                 {"stderr", est.standard_error},
                 {"n_samples", est.n_samples},
                 {"seed", est.seed},
                 {"times", gates.times()},
                 {"values", gates.values()}};
  emit(Destination{out_path(dest, block)}, report.dump(2) + "\n", out);
  return kSuccess;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Irreversible thermodynamics / quantum mechanics correspondence toolkit", "thermoqm"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  app.add_option("--config", config_path, "JSON configuration document");
  app.add_option("--out", output, "output file (default: standard output)");
  app.add_option("--seed", seed, "RNG seed, overrides every seed in the config");
  app.add_option("--tol", tol, "tolerance override for every verify-all identity")->check(CLI::PositiveNumber);

  using Handler = int (*)(const RunConfig&, const Destination&, std::ostream&, std::ostream&);
  const std::map<std::string, Handler> handlers{{"verify-all", cmd_verify_all},
                                                {"sample", cmd_sample},
                                                {"converge", cmd_converge},
                                                {"kernel-eval", cmd_kernel_eval},
                                                {"estimate-gate", cmd_estimate_gate}};
  const std::map<std::string, std::string> help{
      {"verify-all", "run every process and correspondence identity; JSON report"},
      {"sample", "exact OU path ensemble as CSV (path_id,time,value)"},
      {"converge", "time-slicing convergence table as CSV"},
      {"kernel-eval", "propagator / density evaluations as JSON records"},
      {"estimate-gate", "Monte Carlo gate probability as JSON"}};
  for (const auto& [name, _] : handlers) app.add_subcommand(name, help.at(name));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = load_config(config_path, Overrides{seed, tol});
    return handlers.at(name)(config, Destination{output}, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace thermoqm::cli
