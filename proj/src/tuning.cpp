#include "rcbbo/tuning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <set>

#include "rcbbo/csv.hpp"
#include "rcbbo/errors.hpp"

namespace rcbbo {

PerformanceCurve average_curve(std::span<const std::vector<double>> histories, int intervals) {
  if (histories.empty()) throw DomainError("average_curve: no histories");
  if (intervals < 1) throw DomainError("average_curve: intervals must be >= 1");
  const std::size_t horizon = histories.front().size();
  if (horizon == 0) throw DomainError("average_curve: empty history");
  for (const auto& h : histories)
    if (h.size() != horizon) throw DomainError("average_curve: histories have different horizons");

  PerformanceCurve c;
  c.runs = static_cast<int>(histories.size());
  c.interval = static_cast<double>(horizon - 1) / intervals;
  for (int i = 0; i <= intervals; ++i) {
    const auto idx = static_cast<std::size_t>(std::lround(i * c.interval));
    double sum = 0.0;
    for (const auto& h : histories) sum += h[idx];
    c.values.push_back(sum / histories.size());
  }
  return c;
}

double utility_a(const PerformanceCurve& c) { return c.values.back(); }

double utility_b(const PerformanceCurve& c) {
  const std::size_t n = c.values.size() - 1;
  if (n == 0) return c.values.front();
  double area = 0.0;
  for (std::size_t i = 0; i < n; ++i) area += (c.values[i] + c.values[i + 1]) / 2.0;
  return area / n;
}

double utility_c(double fa, double fb, double z) {
  if (!(z >= 1.0)) throw ConfigError("z: weight must be >= 1");
  return (z * fa + fb) / (1.0 + z);
}

double scaled_utility(double cutil, double best) {
  if (!(cutil > 0.0)) throw DomainError("scaled utility needs a positive utility C");
  if (best > cutil) throw DomainError("best utility exceeds utility C");
  return (1.0 - (cutil - best) / cutil) * 100.0;
}

UtilityReport utilities(const PerformanceCurve& curve, double z) {
  UtilityReport r;
  r.fa = utility_a(curve);
  r.fb = utility_b(curve);
  r.fc = utility_c(r.fa, r.fb, z);
  r.z = z;
  return r;
}

// ---------------------------------------------------------------------------

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

constexpr const char* kCacheMagic = "# rcbbo evaluation cache v1 ";

bool parse_record(const std::string& line, std::string& key, double& value) {
  const auto bar = line.rfind('|');
  if (bar == std::string::npos || bar == 0) return false;
  key = line.substr(0, bar);
  const char* first = line.data() + bar + 1;
  const char* last = line.data() + line.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

EvaluationCache::EvaluationCache(const std::filesystem::path& path, const std::string& print) {
  const std::string header = kCacheMagic + print;
  bool clean = false;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    if (std::getline(in, line) && line == header) {
      clean = true;
      std::string key;
      double value;
      while (std::getline(in, line)) {
        if (!parse_record(line, key, value)) {
          clean = false;
          break;
        }
        values_[key] = value;
      }
      // A partial last line (no trailing newline) also counts as corruption.
      if (clean) {
        in.clear();
        in.seekg(0, std::ios::end);
        const auto size = static_cast<long long>(in.tellg());
        if (size > 0) {
          std::ifstream tail(path, std::ios::binary);
          tail.seekg(size - 1);
          clean = tail.get() == '\n';
        }
      }
    }
    if (!clean) {
      values_.clear();
      warning_ = "cache file " + path.string() + " is corrupt or belongs to another problem; rebuilding it";
      std::fprintf(stderr, "warning: %s\n", warning_.c_str());
    }
  }
  if (clean) {
    file_.open(path, std::ios::app);
  } else {
    file_.open(path, std::ios::trunc);
    file_ << header << '\n';
  }
  if (!file_) throw ConfigError("cache: cannot write " + path.string());
  file_.flush();
}

std::optional<double> EvaluationCache::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void EvaluationCache::store(const std::string& key, double value) {
  std::unique_lock lock(mutex_);
  if (!values_.emplace(key, value).second) return;
  if (file_.is_open()) {
    file_ << key << '|' << format_number(value) << '\n';
    file_.flush();
  }
}

std::size_t EvaluationCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

std::vector<double> CachedObjective::evaluate(std::span<const DesignCandidate> candidates) {
  std::vector<double> out(candidates.size());
  std::vector<std::string> keys(candidates.size());
  std::vector<DesignCandidate> pending;
  std::unordered_map<std::string, std::size_t> pending_index;
  std::vector<std::ptrdiff_t> slot(candidates.size(), -1);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    keys[i] = candidates[i].csv_row();
    if (auto v = cache_->find(keys[i])) {
      out[i] = *v;
      ++hits_;
      continue;
    }
    auto [it, inserted] = pending_index.emplace(keys[i], pending.size());
    if (inserted) {
      pending.push_back(candidates[i]);
      ++misses_;
    } else {
      ++hits_;
    }
    slot[i] = static_cast<std::ptrdiff_t>(it->second);
  }
  if (!pending.empty()) {
    const auto values = inner_->evaluate(pending);
    for (std::size_t j = 0; j < pending.size(); ++j) cache_->store(pending[j].csv_row(), values[j]);
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (slot[i] >= 0) out[i] = values[slot[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------

double ackley(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * std::numbers::pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

DesignVariableSpec benchmark_spec(int dimension, int bins, double bound) {
  if (dimension < 1) throw SpecError("benchmark dimension must be >= 1");
  if (bins < 1 || bins % 2 == 0) throw SpecError("benchmark bin count must be odd");
  if (!(bound > 0.0)) throw SpecError("benchmark bound must be > 0");
  const double width = 2.0 * bound / bins;
  std::vector<double> centres;
  for (int i = 0; i < bins; ++i) centres.push_back((i - (bins - 1) / 2) * width);
  DesignVariableSpec spec;
  for (int d = 0; d < dimension; ++d)
    spec.variables.push_back({"x" + std::to_string(d + 1), VariableKind::real, centres});
  return spec;
}

DesignVariableSpec ackley_spec(int dimension, int bins) { return benchmark_spec(dimension, bins, kAckleyBound); }

Objective benchmark_objective(double (*fn)(std::span<const double>)) {
  return [fn](const DesignCandidate& c) { return fn(c.values); };
}

// ---------------------------------------------------------------------------

void LandscapeConfig::validate() const {
  const auto& known = tunable_parameters();
  auto check = [&](const std::string& name, const char* where) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ConfigError(std::string(where) + ": unknown parameter '" + name + "'");
  };
  if (axes.empty() || axes.size() > 2) throw ConfigError("axes: one or two parameters are required");
  std::set<std::string> seen;
  for (const auto& a : axes) {
    check(a.name, "axes");
    if (!seen.insert(a.name).second) throw ConfigError("axes: parameter '" + a.name + "' repeated");
    if (a.values.empty()) throw ConfigError("axes: parameter '" + a.name + "' has no values");
  }
  for (const auto& [name, value] : fixed) {
    check(name, "fixed");
    if (seen.count(name)) throw ConfigError("fixed: parameter '" + name + "' is also an axis");
  }
  if (runs_per_cell < 1) throw ConfigError("runs: must be >= 1");
  if (iterations < 1) throw ConfigError("iterations: must be >= 1");
  if (!(z >= 1.0)) throw ConfigError("z: weight must be >= 1");
}

namespace {

void set_parameter(BboParams& p, const std::string& name, double v) {
  if (name == "popsize")
    p.pop_size = static_cast<int>(std::lround(v));
  else if (name == "alpha")
    p.alpha = v;
  else if (name == "mutprob")
    p.mut_prob = v;
  else if (name == "keeprate")
    p.keep_rate = v;
  else
    throw ConfigError("unknown parameter '" + name + "'");
}

template <class T>
T pick(const std::vector<T>& options, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
  return options[d(rng)];
}

}  // namespace

BboParams draw_parameters(const LandscapeConfig& config, std::span<const double> axis_values, Rng& rng) {
  BboParams p;
  p.max_iterations = config.iterations;
  // Drawn in a fixed order so every run consumes the same number of variates.
  const double pop = pick<double>({60, 80, 100, 120, 140}, rng);
  const double alpha = pick<double>({0.90, 0.95, 0.99}, rng);
  const double mut = pick<double>({0.3, 0.4, 0.5}, rng);
  const double keep = std::uniform_real_distribution<double>(0.2, 0.6)(rng);
  set_parameter(p, "popsize", pop);
  set_parameter(p, "alpha", alpha);
  set_parameter(p, "mutprob", mut);
  set_parameter(p, "keeprate", keep);
  for (const auto& [name, v] : config.fixed) set_parameter(p, name, v);
  for (std::size_t i = 0; i < config.axes.size(); ++i) set_parameter(p, config.axes[i].name, axis_values[i]);
  return p;
}

Landscape run_landscape(const LandscapeConfig& config, const DesignVariableSpec& spec, BatchObjective& objective) {
  config.validate();
  std::vector<std::vector<double>> grid{{}};
  for (const auto& axis : config.axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : grid)
      for (double v : axis.values) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    grid = std::move(next);
  }

  Landscape out;
  double best_single = std::numeric_limits<double>::infinity();
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    std::vector<std::vector<double>> histories;
    LandscapeCell c;
    c.axis_values = grid[cell];
    c.best_final = std::numeric_limits<double>::infinity();
    int successes = 0;
    double evaluations = 0.0;
    for (int run = 0; run < config.runs_per_cell; ++run) {
      const auto run_seed = derive_seed(config.seed, cell, static_cast<std::uint64_t>(run));
      Rng param_rng(derive_seed(run_seed, 1));
      auto params = draw_parameters(config, grid[cell], param_rng);
      params.seed = run_seed;
      auto result = run_bbo(spec, params, objective);
      const double final_value = result.best_history.back();
      if (final_value < config.success_threshold) ++successes;
      c.best_final = std::min(c.best_final, final_value);
      evaluations += static_cast<double>(result.evaluations);
      histories.push_back(std::move(result.best_history));
    }
    const auto curve = average_curve(histories, config.intervals);
    c.utility = utilities(curve, config.z);
    c.success_rate = static_cast<double>(successes) / config.runs_per_cell;
    c.mean_evaluations = evaluations / config.runs_per_cell;
    best_single = std::min(best_single, c.best_final);
    out.cells.push_back(std::move(c));
  }

  out.best_ut = config.known_optimum.value_or(best_single);
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    auto& c = out.cells[i];
    const double C = c.utility.fc;
    if (C == out.best_ut)
      c.scaled = 100.0;
    else if (C > 0.0 && out.best_ut <= C)
      c.scaled = scaled_utility(C, out.best_ut);
    else
      c.scaled = std::numeric_limits<double>::quiet_NaN();
    if (C < out.cells[out.best_cell].utility.fc) out.best_cell = i;
  }
  return out;
}

}  // namespace rcbbo
