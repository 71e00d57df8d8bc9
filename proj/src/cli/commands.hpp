#ifndef THERMOQM_CLI_COMMANDS_HPP
#define THERMOQM_CLI_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace thermoqm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
};

struct Destination {
  /// Output file; standard output when empty.
  std::optional<std::string> path;
};

int cmd_verify_all(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err);
int cmd_sample(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err);
int cmd_converge(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err);
int cmd_kernel_eval(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err);
int cmd_estimate_gate(const RunConfig& config, const Destination& dest, std::ostream& out, std::ostream& err);

/// Full command line: `thermoqm <subcommand> [--config PATH] [--out PATH] [--seed N] [--tol X]`.
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermoqm::cli

#endif  // THERMOQM_CLI_COMMANDS_HPP
