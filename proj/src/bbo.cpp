#include "rcbbo/bbo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "rcbbo/errors.hpp"

namespace rcbbo {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = master;
  std::uint64_t x = splitmix64(s);
  s = x ^ a;
  x = splitmix64(s);
  s = x ^ b;
  return splitmix64(s);
}

void BboParams::validate() const {
  if (pop_size < 2) throw ConfigError("popsize: must be >= 2");
  if (!(keep_rate >= 0.0 && keep_rate < 1.0)) throw ConfigError("keeprate: must lie in [0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha: must lie in (0, 1]");
  if (!(mut_prob >= 0.0 && mut_prob <= 1.0)) throw ConfigError("mutprob: must lie in [0, 1]");
  if (!(sigma > 0.0)) throw ConfigError("sigma: must be > 0");
  if (!(sigma_damping > 0.0 && sigma_damping <= 1.0)) throw ConfigError("sigma_damping: must lie in (0, 1]");
  if (max_iterations < 1) throw ConfigError("iterations: must be >= 1");
  if (stagnation_window && *stagnation_window < 1) throw ConfigError("stagnation: must be >= 1");
}

ParallelObjective::ParallelObjective(Objective fn, int workers, double sentinel)
    : fn_(std::move(fn)), workers_(std::max(1, workers)), sentinel_(sentinel) {}

std::vector<double> ParallelObjective::evaluate(std::span<const DesignCandidate> candidates) {
  std::vector<double> out(candidates.size());
  auto one = [&](std::size_t i) {
    double v;
    try {
      v = fn_(candidates[i]);
    } catch (const std::exception&) {
      v = sentinel_;
    }
    if (!std::isfinite(v)) v = sentinel_;
    out[i] = v;
    calls_.fetch_add(1, std::memory_order_relaxed);
  };
  const std::size_t n = candidates.size();
  const std::size_t workers = std::min<std::size_t>(workers_, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) one(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

Rates assign_rates(std::size_t n) {
  Rates r;
  r.mu.resize(n);
  r.lambda.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    r.mu[i] = 1.0 - x;
    r.lambda[i] = x;
  }
  return r;
}

double migrate(double species_i, double species_j, double alpha) {
  return std::clamp(species_i + alpha * (species_j - species_i), 0.0, 1.0);
}

double mutate(double species, double sigma, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::clamp(species + sigma * normal(rng), 0.0, 1.0);
}

std::size_t select_emigrant(std::span<const double> mu, std::size_t self, Rng& rng) {
  double total = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j)
    if (j != self) total += mu[j];
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (total <= 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, mu.size() - 2);
    const std::size_t j = pick(rng);
    return j >= self ? j + 1 : j;
  }
  const double target = u(rng) * total;
  double acc = 0.0;
  std::size_t last = self;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (j == self || mu[j] <= 0.0) continue;
    acc += mu[j];
    last = j;
    if (target < acc) return j;
  }
  return last;
}

void sort_population(std::vector<Habitat>& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const Habitat& a, const Habitat& b) { return a.hsi < b.hsi; });
}

Bbo::Bbo(const DesignVariableSpec& spec, BboParams params)
    : spec_(&spec), params_(params), rng_(params.seed), sigma_(params.sigma) {
  params_.validate();
  if (spec.size() == 0) throw SpecError("design space has no variables");
}

std::vector<double> Bbo::evaluate(const std::vector<std::vector<double>>& genomes, BatchObjective& objective) {
  std::vector<DesignCandidate> batch;
  batch.reserve(genomes.size());
  for (const auto& g : genomes) batch.push_back(decode_candidate(g, *spec_));
  evaluations_ += batch.size();
  return objective.evaluate(batch);
}

std::vector<Habitat> Bbo::initial_population(BatchObjective& objective) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> genomes(params_.pop_size, std::vector<double>(spec_->size()));
  for (auto& g : genomes)
    for (auto& x : g) x = u(rng_);
  const auto hsi = evaluate(genomes, objective);
  std::vector<Habitat> pop;
  for (std::size_t i = 0; i < genomes.size(); ++i) pop.push_back({std::move(genomes[i]), hsi[i]});
  sort_population(pop);
  return pop;
}

std::vector<Habitat> Bbo::step(const std::vector<Habitat>& population, BatchObjective& objective) {
  const std::size_t n = population.size();
  const auto rates = assign_rates(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<std::vector<double>> genomes(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto g = population[i].species;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (u(rng_) < rates.lambda[i]) {
        const auto j = select_emigrant(rates.mu, i, rng_);
        g[k] = migrate(population[i].species[k], population[j].species[k], params_.alpha);
      }
      if (u(rng_) < params_.mut_prob) g[k] = mutate(g[k], sigma_, rng_);
    }
    genomes[i] = std::move(g);
  }
  const auto hsi = evaluate(genomes, objective);
  std::vector<Habitat> fresh;
  fresh.reserve(n);
  for (std::size_t i = 0; i < n; ++i) fresh.push_back({std::move(genomes[i]), hsi[i]});
  sort_population(fresh);

  const auto keep = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(params_.keep_rate * n - 1e-12)));
  std::vector<Habitat> next(population.begin(), population.begin() + keep);
  next.insert(next.end(), fresh.begin(), fresh.begin() + (n - keep));
  sort_population(next);
  sigma_ *= params_.sigma_damping;
  return next;
}

BboResult Bbo::run(BatchObjective& objective) {
  BboResult r;
  auto pop = initial_population(objective);
  double best = pop.front().hsi;
  int since_improvement = 0;
  for (int it = 0; it < params_.max_iterations; ++it) {
    pop = step(pop, objective);
    double sum = 0.0;
    for (const auto& h : pop) sum += h.hsi;
    r.best_history.push_back(pop.front().hsi);
    r.mean_history.push_back(sum / pop.size());
    ++r.iterations;
    if (pop.front().hsi < best) {
      best = pop.front().hsi;
      since_improvement = 0;
    } else if (params_.stagnation_window && ++since_improvement >= *params_.stagnation_window) {
      break;
    }
  }
  r.best = decode_candidate(pop.front().species, *spec_);
  r.best_hsi = pop.front().hsi;
  r.evaluations = evaluations_;
  return r;
}

BboResult run_bbo(const DesignVariableSpec& spec, const BboParams& params, BatchObjective& objective) {
  Bbo bbo(spec, params);
  return bbo.run(objective);
}

}  // namespace rcbbo
