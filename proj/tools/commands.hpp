#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcbbo/tuning.hpp"

namespace rcbbo::cli {

/// Everything one subcommand needs. Paths are used verbatim.
struct RunOptions {
  std::string command;  ///< optimize | enumerate | tune | analyze
  std::filesystem::path model;
  std::filesystem::path spec;
  std::filesystem::path soil;
  std::filesystem::path costs;
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> cache;  ///< persistent evaluation cache
  bool use_cache = true;                       ///< in-memory cache when no path is given
  bool sssi = false;
  std::uint64_t seed = 1;
  int workers = 1;

  // BBO overrides
  std::optional<int> popsize;
  std::optional<double> alpha;
  std::optional<double> mutprob;
  std::optional<double> keeprate;
  int iterations = 200;
  std::optional<int> stagnation;

  // enumerate
  std::uint64_t enumerate_cap = 100000;

  // tune
  std::string objective = "structure";  ///< structure | ackley | sphere
  std::vector<ParameterAxis> axes;
  std::map<std::string, double> fixed;
  int runs = 30;
  int dimension = 16;
  int bins = kAckleyBins;

  // analyze
  std::vector<double> values;  ///< one value per variable; empty selects the first candidate
};

struct CommandResult {
  int exit_code = 0;
  std::uint64_t objective_calls = 0;  ///< evaluations that reached the objective
  std::uint64_t cache_hits = 0;
  std::vector<std::filesystem::path> artifacts;
  std::string message;
};

/// Exit codes: 0 success, 2 configuration error, 3 no feasible candidate,
/// 4 numerical failure.
enum ExitCode : int { kOk = 0, kConfigError = 2, kInfeasible = 3, kNumericalFailure = 4 };

/// Runs a subcommand; never throws. Progress and errors go to `log`.
CommandResult run_command(const RunOptions& options, std::ostream& log);

/// "name=v1,v2,..." → axis. Throws ConfigError.
ParameterAxis parse_axis(const std::string& text);
/// "v1,v2,..." → numbers. Throws ConfigError naming `what`.
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace rcbbo::cli
