#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rcbbo/model.hpp"

namespace rcbbo {

/// SplitMix64 step; used to derive independent per-run seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for (master, a, b) streams, e.g. (campaign seed, cell, run).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

using Rng = std::mt19937_64;

struct BboParams {
  int pop_size = 80;
  double keep_rate = 0.40;
  double alpha = 0.99;
  double mut_prob = 0.5;
  double sigma = 0.05;
  double sigma_damping = 0.99;
  int max_iterations = 200;
  std::optional<int> stagnation_window;  ///< stop after this many iterations without improvement
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the offending parameter.
  void validate() const;
};

/// Evaluates a batch of candidates; results align with the input.
class BatchObjective {
 public:
  virtual ~BatchObjective() = default;
  virtual std::vector<double> evaluate(std::span<const DesignCandidate> candidates) = 0;
};

using Objective = std::function<double(const DesignCandidate&)>;

/// Runs a pure objective over a batch with a fixed number of worker threads.
/// Exceptions from the objective become the sentinel value.
class ParallelObjective : public BatchObjective {
 public:
  ParallelObjective(Objective fn, int workers = 1, double sentinel = 1e9);
  std::vector<double> evaluate(std::span<const DesignCandidate> candidates) override;
  std::uint64_t calls() const { return calls_.load(); }

 private:
  Objective fn_;
  int workers_;
  double sentinel_;
  std::atomic<std::uint64_t> calls_{0};
};

struct Habitat {
  std::vector<double> species;  ///< SIVs in [0,1]
  double hsi = 0.0;             ///< penalized cost, lower is better
};

/// Rank-linear rates for a population sorted best first: μ = 1 − r/(N−1), λ = r/(N−1).
struct Rates {
  std::vector<double> mu;
  std::vector<double> lambda;
};
Rates assign_rates(std::size_t n);

/// Eq. blend toward the emigrant, clamped to [0,1].
double migrate(double species_i, double species_j, double alpha);

/// Gaussian step with the given sigma, clamped to [0,1].
double mutate(double species, double sigma, Rng& rng);

/// Roulette wheel over μ excluding `self`; uniform over the others when all
/// their rates are zero.
std::size_t select_emigrant(std::span<const double> mu, std::size_t self, Rng& rng);

/// Stable sort by HSI, best first.
void sort_population(std::vector<Habitat>& population);

struct BboResult {
  DesignCandidate best;
  double best_hsi = 0.0;
  std::vector<double> best_history;  ///< best HSI after each iteration
  std::vector<double> mean_history;  ///< mean HSI after each iteration
  int iterations = 0;
  std::uint64_t evaluations = 0;     ///< habitats submitted to the objective
};

class Bbo {
 public:
  Bbo(const DesignVariableSpec& spec, BboParams params);

  /// Uniform random population of pop_size habitats, evaluated and sorted.
  std::vector<Habitat> initial_population(BatchObjective& objective);
  /// One generation: migration, mutation, evaluation, elitism. Damps sigma.
  std::vector<Habitat> step(const std::vector<Habitat>& population, BatchObjective& objective);

  BboResult run(BatchObjective& objective);

  double sigma() const { return sigma_; }
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  std::vector<double> evaluate(const std::vector<std::vector<double>>& genomes, BatchObjective& objective);

  const DesignVariableSpec* spec_;
  BboParams params_;
  Rng rng_;
  double sigma_;
  std::uint64_t evaluations_ = 0;
};

/// Convenience wrapper.
BboResult run_bbo(const DesignVariableSpec& spec, const BboParams& params, BatchObjective& objective);

}  // namespace rcbbo
