#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rcbbo/bbo.hpp"
#include "rcbbo/model.hpp"

namespace rcbbo {

/// Mean best-fitness sampled at intervals + 1 equally spaced checkpoints.
struct PerformanceCurve {
  std::vector<double> values;
  int runs = 0;
  double interval = 0.0;  ///< checkpoint spacing in iterations
};

/// Pointwise mean of equal-length histories, sampled at the nearest iteration
/// index to each checkpoint. Throws DomainError on mismatched horizons.
PerformanceCurve average_curve(std::span<const std::vector<double>> histories, int intervals = 14);

double utility_a(const PerformanceCurve& curve);  ///< last point
double utility_b(const PerformanceCurve& curve);  ///< trapezoid mean
/// (Z·F_A + F_B)/(1 + Z); throws ConfigError for Z < 1.
double utility_c(double fa, double fb, double z = 4.0);
/// (1 − (C − Best)/C)·100; throws DomainError when Best > C or C ≤ 0.
double scaled_utility(double cutil, double best);

struct UtilityReport {
  double fa = 0.0;
  double fb = 0.0;
  double fc = 0.0;
  double z = 4.0;
};

UtilityReport utilities(const PerformanceCurve& curve, double z = 4.0);

// ---------------------------------------------------------------------------
// Evaluation cache

/// Key → objective value store keyed by the decoded candidate. Concurrent
/// reads, serialized writes. Optionally persisted as an append-only file with
/// a fingerprint header; a corrupt or foreign file is discarded with a warning.
class EvaluationCache {
 public:
  EvaluationCache() = default;
  EvaluationCache(const std::filesystem::path& file, const std::string& fingerprint);

  EvaluationCache(const EvaluationCache&) = delete;
  EvaluationCache& operator=(const EvaluationCache&) = delete;

  std::optional<double> find(const std::string& key) const;
  void store(const std::string& key, double value);
  std::size_t size() const;
  /// Warning raised while loading, empty when the file was clean.
  const std::string& warning() const { return warning_; }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, double> values_;
  std::ofstream file_;
  std::string warning_;
};

/// FNV-1a 64 of the text, as 16 hex digits.
std::string fingerprint(const std::string& text);

/// Serves repeated candidates from the cache; unseen ones go to the inner
/// objective in first-occurrence order, so results and counts do not depend
/// on thread timing.
class CachedObjective : public BatchObjective {
 public:
  CachedObjective(BatchObjective& inner, EvaluationCache& cache) : inner_(&inner), cache_(&cache) {}
  std::vector<double> evaluate(std::span<const DesignCandidate> candidates) override;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  BatchObjective* inner_;
  EvaluationCache* cache_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// ---------------------------------------------------------------------------
// Benchmarks

double ackley(std::span<const double> x);
double sphere(std::span<const double> x);

/// `dimension` real variables, each with `bins` (odd) centres spread over
/// [−bound, bound]; the middle centre is exactly 0.
DesignVariableSpec benchmark_spec(int dimension, int bins, double bound);

inline constexpr double kAckleyBound = 32.768;
inline constexpr int kAckleyBins = 33;

DesignVariableSpec ackley_spec(int dimension = 16, int bins = kAckleyBins);

/// Objective over a benchmark spec: evaluates the function at the candidate's bin centres.
Objective benchmark_objective(double (*fn)(std::span<const double>));

// ---------------------------------------------------------------------------
// Landscapes

inline const std::vector<std::string>& tunable_parameters() {
  static const std::vector<std::string> names{"popsize", "alpha", "mutprob", "keeprate"};
  return names;
}

struct ParameterAxis {
  std::string name;  ///< popsize | alpha | mutprob | keeprate
  std::vector<double> values;
};

struct LandscapeConfig {
  std::vector<ParameterAxis> axes;           ///< one or two
  std::map<std::string, double> fixed;       ///< parameters held constant
  int runs_per_cell = 30;
  int iterations = 200;
  int intervals = 14;
  double z = 4.0;
  double success_threshold = 1e-3;
  std::uint64_t seed = 1;
  std::optional<double> known_optimum;       ///< BestUt when the optimum is known

  /// Throws ConfigError on unknown or repeated parameter names.
  void validate() const;
};

struct LandscapeCell {
  std::vector<double> axis_values;
  UtilityReport utility;
  double scaled = 0.0;        ///< ScUt against the campaign best
  double success_rate = 0.0;  ///< share of runs ending below the threshold
  double best_final = 0.0;    ///< best single final value in the cell
  double mean_evaluations = 0.0;
};

struct Landscape {
  std::vector<LandscapeCell> cells;  ///< first axis most significant
  double best_ut = 0.0;
  std::size_t best_cell = 0;         ///< lowest utility C
};

/// Non-axis parameters not listed in `fixed` are drawn per run: PopSize from
/// {60, 80, 100, 120, 140}, Alpha from {0.90, 0.95, 0.99}, MutProb from
/// {0.3, 0.4, 0.5}, KeepRate uniform on [0.2, 0.6].
BboParams draw_parameters(const LandscapeConfig& config, std::span<const double> axis_values, Rng& rng);

Landscape run_landscape(const LandscapeConfig& config, const DesignVariableSpec& spec, BatchObjective& objective);

}  // namespace rcbbo
