#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "rcbbo/csv.hpp"
#include "rcbbo/errors.hpp"
#include "rcbbo/evaluator.hpp"
#include "rcbbo/io.hpp"

namespace rcbbo::cli {

namespace fs = std::filesystem;

namespace {

struct Problem {
  std::unique_ptr<StructuralEvaluator> evaluator;
  DesignVariableSpec spec;
  std::string fingerprint_text;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError(p.string() + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Problem load_problem(const RunOptions& o) {
  if (o.model.empty()) throw ConfigError("--model: required");
  if (o.spec.empty()) throw ConfigError("--spec: required");
  if (o.costs.empty()) throw ConfigError("--costs: required");
  const auto model_json = read_json(o.model);
  StructuralModel model;
  DesignSettings settings;
  try {
    model = parse_model(model_json);
    settings = parse_settings(model_json.contains("settings") ? model_json["settings"] : Json());
  } catch (const ConfigError& e) {
    throw ConfigError(o.model.string() + ": " + e.what());
  }
  auto spec = load_spec(o.spec);
  auto costs = load_costs(o.costs);
  std::optional<SoilProfile> soil;
  if (!o.soil.empty()) soil = load_soil(o.soil);

  Problem p;
  p.spec = spec;
  p.fingerprint_text = slurp(o.model) + '\n' + slurp(o.spec) + '\n' + slurp(o.costs) + '\n' +
                       (o.soil.empty() ? std::string() : slurp(o.soil)) + (o.sssi ? "\nsssi=on" : "\nsssi=off");
  p.evaluator = std::make_unique<StructuralEvaluator>(std::move(model), std::move(spec), std::move(soil),
                                                      std::move(costs), std::move(settings), o.sssi);
  return p;
}

BboParams bbo_params(const RunOptions& o) {
  BboParams p;
  if (o.popsize) p.pop_size = *o.popsize;
  if (o.alpha) p.alpha = *o.alpha;
  if (o.mutprob) p.mut_prob = *o.mutprob;
  if (o.keeprate) p.keep_rate = *o.keeprate;
  p.max_iterations = o.iterations;
  p.stagnation_window = o.stagnation;
  p.seed = o.seed;
  p.validate();
  return p;
}

// Reproducibility header: every input that influences the artifact, nothing else.
std::vector<std::pair<std::string, std::string>> header_fields(const RunOptions& o) {
  std::vector<std::pair<std::string, std::string>> f;
  f.emplace_back("command", o.command);
  f.emplace_back("seed", std::to_string(o.seed));
  if (o.command == "tune") {
    f.emplace_back("objective", o.objective);
    for (const auto& a : o.axes) f.emplace_back("axis." + a.name, join_numbers(a.values, ' '));
    for (const auto& [k, v] : o.fixed) f.emplace_back("fixed." + k, format_number(v));
    f.emplace_back("runs", std::to_string(o.runs));
    f.emplace_back("iterations", std::to_string(o.iterations));
    if (o.objective != "structure") {
      f.emplace_back("dimension", std::to_string(o.dimension));
      f.emplace_back("bins", std::to_string(o.bins));
    }
  } else if (o.command == "optimize") {
    const auto p = bbo_params(o);
    f.emplace_back("popsize", std::to_string(p.pop_size));
    f.emplace_back("keeprate", format_number(p.keep_rate));
    f.emplace_back("alpha", format_number(p.alpha));
    f.emplace_back("mutprob", format_number(p.mut_prob));
    f.emplace_back("sigma", format_number(p.sigma));
    f.emplace_back("sigma_damping", format_number(p.sigma_damping));
    f.emplace_back("iterations", std::to_string(p.max_iterations));
    if (p.stagnation_window) f.emplace_back("stagnation", std::to_string(*p.stagnation_window));
  }
  if (o.command != "tune" || o.objective == "structure") {
    f.emplace_back("model", o.model.string());
    f.emplace_back("spec", o.spec.string());
    f.emplace_back("costs", o.costs.string());
    f.emplace_back("soil", o.soil.string());
    f.emplace_back("sssi", o.sssi ? "on" : "off");
  }
  return f;
}

std::string header_line(const RunOptions& o) {
  std::string s = "# rcbbo";
  for (const auto& [k, v] : header_fields(o)) s += " " + k + "=" + v;
  return s;
}

Json header_json(const RunOptions& o) {
  Json j = Json::object();
  for (const auto& [k, v] : header_fields(o)) j[k] = v;
  return j;
}

void write_text(const fs::path& path, const std::string& content, CommandResult& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("--out: cannot write " + path.string());
  out << content;
  r.artifacts.push_back(path);
}

Json candidate_json(const DesignCandidate& c, const DesignVariableSpec& spec) {
  Json j = Json::object();
  Json values = Json::object();
  for (std::size_t i = 0; i < spec.size(); ++i) values[spec.variables[i].name] = c.values[i];
  j["values"] = values;
  j["indices"] = c.indices;
  return j;
}

Json checks_json(const std::vector<CheckResult>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["demand"] = c.demand;
    j["capacity"] = c.capacity;
    j["ratio"] = c.ratio;
    j["pass"] = c.pass;
    if (c.advisory) j["advisory"] = true;
    if (!c.reason.empty()) j["reason"] = c.reason;
    a.push_back(j);
  }
  return a;
}

Json evaluation_json(const Evaluation& ev) {
  Json j;
  j["cost"] = ev.cost;
  j["penalized_cost"] = ev.penalized;
  j["feasible"] = ev.feasible();
  if (ev.sentinel) j["failure"] = ev.failure;
  Json cats;
  cats["formwork"] = ev.breakdown.formwork;
  cats["steel"] = ev.breakdown.steel;
  cats["concrete"] = ev.breakdown.concrete;
  cats["earthwork"] = ev.breakdown.earthwork;
  j["cost_categories"] = cats;
  Json members = Json::array();
  for (const auto& m : ev.members) {
    Json mj;
    mj["id"] = m.id;
    mj["role"] = m.role == MemberRole::beam ? "beam" : "column";
    mj["b"] = m.section.b;
    mj["h"] = m.section.h;
    mj["fc"] = m.section.fc;
    if (m.role == MemberRole::beam) {
      mj["bottom"] = std::to_string(m.beam.bottom.count) + "x" + std::to_string(m.beam.bottom.diameter);
      mj["top"] = std::to_string(m.beam.top.count) + "x" + std::to_string(m.beam.top.diameter);
      mj["stirrup_spacing"] = m.beam.stirrups.spacing;
    } else {
      mj["bars"] = std::to_string(m.column.bar_count()) + "x" + std::to_string(m.column.diameter);
      mj["tie_spacing"] = m.column.ties.spacing;
    }
    members.push_back(mj);
  }
  j["members"] = members;
  Json footings = Json::array();
  for (const auto& f : ev.footings) {
    const auto& ft = f.sized.footing;
    Json fj;
    fj["node"] = f.node;
    fj["group"] = f.group;
    fj["L"] = ft.L;
    fj["B"] = ft.B;
    fj["t"] = ft.t;
    fj["D"] = ft.D;
    fj["pressure"] = f.sized.geotechnical.pressure;
    fj["settlement"] = f.sized.geotechnical.settlement;
    fj["bearing_capacity"] = f.sized.geotechnical.q_ult;
    fj["bars_L"] = std::to_string(ft.bars_L.count) + "x" + std::to_string(ft.bars_L.diameter);
    fj["bars_B"] = std::to_string(ft.bars_B.count) + "x" + std::to_string(ft.bars_B.diameter);
    footings.push_back(fj);
  }
  j["footings"] = footings;
  if (ev.sssi) {
    Json s;
    s["iterations"] = ev.sssi->iterations;
    s["converged"] = ev.sssi->converged;
    Json ks = Json::array();
    for (const auto& st : ev.sssi->states) ks.push_back(st.k);
    s["k"] = ks;
    j["sssi"] = s;
  }
  j["checks"] = checks_json(ev.checks);
  return j;
}

std::string breakdown_csv(const RunOptions& o, const CostBreakdown& b) {
  std::string s = header_line(o) + "\nterm,cost\n";
  for (const auto& t : b.terms) s += t.name + "," + format_number(t.value) + "\n";
  s += "category.formwork," + format_number(b.formwork) + "\n";
  s += "category.steel," + format_number(b.steel) + "\n";
  s += "category.concrete," + format_number(b.concrete) + "\n";
  s += "category.earthwork," + format_number(b.earthwork) + "\n";
  s += "total," + format_number(b.total) + "\n";
  return s;
}

std::string checks_csv(const RunOptions& o, const std::vector<CheckResult>& checks) {
  std::string s = header_line(o) + "\nname,demand,capacity,ratio,pass,advisory,reason\n";
  for (const auto& c : checks)
    s += c.name + "," + format_number(c.demand) + "," + format_number(c.capacity) + "," + format_number(c.ratio) +
         "," + (c.pass ? "1" : "0") + "," + (c.advisory ? "1" : "0") + "," + c.reason + "\n";
  return s;
}

std::string sssi_trace_csv(const RunOptions& o, const SssiResult& r) {
  std::string s = header_line(o) + "\niteration,footing,node,k,settlement,pressure\n";
  for (const auto& t : r.trace)
    s += std::to_string(t.iteration) + "," + std::to_string(t.footing) + "," + std::to_string(t.node) + "," +
         format_number(t.k) + "," + format_number(t.settlement) + "," + format_number(t.pressure) + "\n";
  return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Objective stack shared by optimize and tune: parallel evaluation, with the
/// cache in front when enabled.
struct ObjectiveStack {
  std::unique_ptr<ParallelObjective> base;
  std::unique_ptr<EvaluationCache> cache;
  std::unique_ptr<CachedObjective> cached;

  ObjectiveStack(Objective fn, const RunOptions& o, const std::string& fingerprint_text, double sentinel) {
    base = std::make_unique<ParallelObjective>(std::move(fn), o.workers, sentinel);
    if (o.cache)
      cache = std::make_unique<EvaluationCache>(*o.cache, fingerprint(fingerprint_text));
    else if (o.use_cache)
      cache = std::make_unique<EvaluationCache>();
    if (cache) cached = std::make_unique<CachedObjective>(*base, *cache);
  }
  BatchObjective& objective() { return cached ? static_cast<BatchObjective&>(*cached) : *base; }
  void report(CommandResult& r) const {
    r.objective_calls = base->calls();
    r.cache_hits = cached ? cached->hits() : 0;
  }
};

template <class F>
std::vector<Evaluation> evaluate_all(const std::vector<DesignCandidate>& cands, int workers, F&& fn) {
  std::vector<Evaluation> out(cands.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cands.size();) out[i] = fn(cands[i]);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(cands.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

CommandResult cmd_optimize(const RunOptions& o, std::ostream& log) {
  CommandResult r;
  auto problem = load_problem(o);
  const auto params = bbo_params(o);
  const auto& ev = *problem.evaluator;
  ObjectiveStack stack([&ev](const DesignCandidate& c) { return ev.objective(c); }, o, problem.fingerprint_text,
                       ev.settings().infeasible_cost);
  const auto result = run_bbo(problem.spec, params, stack.objective());
  stack.report(r);
  const auto best = ev.evaluate(result.best);

  fs::create_directories(o.out);
  Json j;
  j["run"] = header_json(o);
  j["candidate"] = candidate_json(result.best, problem.spec);
  j["best_hsi"] = result.best_hsi;
  j["evaluation"] = evaluation_json(best);
  write_text(o.out / "best_candidate.json", dump(j), r);
  write_text(o.out / "cost_breakdown.csv", breakdown_csv(o, best.breakdown), r);
  write_text(o.out / "checks.csv", checks_csv(o, best.checks), r);
  std::string h = header_line(o) + "\niteration,best_hsi,mean_hsi\n";
  for (std::size_t i = 0; i < result.best_history.size(); ++i)
    h += std::to_string(i + 1) + "," + format_number(result.best_history[i]) + "," +
         format_number(result.mean_history[i]) + "\n";
  write_text(o.out / "history.csv", h, r);
  if (best.sssi) write_text(o.out / "sssi_trace.csv", sssi_trace_csv(o, *best.sssi), r);

  log << "best " << result.best.csv_row() << " cost " << format_number(best.cost) << " penalized "
      << format_number(best.penalized) << (best.feasible() ? "" : " (infeasible)") << "\n";
  r.exit_code = best.feasible() ? kOk : kInfeasible;
  if (!best.feasible()) r.message = "best candidate violates checks";
  return r;
}

CommandResult cmd_enumerate(const RunOptions& o, std::ostream& log) {
  CommandResult r;
  auto problem = load_problem(o);
  const auto count = candidate_count(problem.spec);
  if (count > o.enumerate_cap) {
    r.exit_code = kConfigError;
    r.message = "refusing to enumerate " + std::to_string(count) + " candidates (cap " +
                std::to_string(o.enumerate_cap) + ")";
    log << "error: " << r.message << "\n";
    return r;
  }
  std::vector<DesignCandidate> cands;
  cands.reserve(count);
  for (const auto& c : enumerate_candidates(problem.spec)) cands.push_back(c);
  const auto& ev = *problem.evaluator;
  const auto evals = evaluate_all(cands, o.workers, [&ev](const DesignCandidate& c) { return ev.evaluate(c); });
  r.objective_calls = cands.size();

  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return evals[a].penalized < evals[b].penalized; });

  fs::create_directories(o.out);
  std::string s = header_line(o) + "\nrank";
  for (const auto& v : problem.spec.variables) s += "," + v.name;
  s += ",penalized_cost,cost,feasible\n";
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    s += std::to_string(k + 1) + "," + cands[i].csv_row() + "," + format_number(evals[i].penalized) + "," +
         format_number(evals[i].cost) + "," + (evals[i].feasible() ? "1" : "0") + "\n";
  }
  write_text(o.out / "ranking.csv", s, r);

  const auto best = order.front();
  Json j;
  j["run"] = header_json(o);
  j["candidates"] = cands.size();
  j["candidate"] = candidate_json(cands[best], problem.spec);
  j["evaluation"] = evaluation_json(evals[best]);
  write_text(o.out / "optimum.json", dump(j), r);
  log << "optimum " << cands[best].csv_row() << " penalized " << format_number(evals[best].penalized) << " of "
      << cands.size() << " candidates\n";
  r.exit_code = evals[best].feasible() ? kOk : kInfeasible;
  if (r.exit_code != kOk) r.message = "no candidate passes every check";
  return r;
}

CommandResult cmd_tune(const RunOptions& o, std::ostream& log) {
  CommandResult r;
  LandscapeConfig config;
  config.axes = o.axes;
  config.fixed = o.fixed;
  config.runs_per_cell = o.runs;
  config.iterations = o.iterations;
  config.seed = o.seed;
  config.validate();

  DesignVariableSpec spec;
  Objective fn;
  std::string print;
  std::unique_ptr<Problem> problem;
  double sentinel = 1e9;
  if (o.objective == "ackley" || o.objective == "sphere") {
    spec = o.objective == "ackley" ? ackley_spec(o.dimension, o.bins) : benchmark_spec(o.dimension, o.bins, 5.12);
    fn = benchmark_objective(o.objective == "ackley" ? &ackley : &sphere);
    config.known_optimum = 0.0;
    print = o.objective + " dimension=" + std::to_string(o.dimension) + " bins=" + std::to_string(o.bins);
  } else if (o.objective == "structure") {
    problem = std::make_unique<Problem>(load_problem(o));
    spec = problem->spec;
    const auto* ev = problem->evaluator.get();
    fn = [ev](const DesignCandidate& c) { return ev->objective(c); };
    print = problem->fingerprint_text;
    sentinel = ev->settings().infeasible_cost;
  } else {
    throw ConfigError("--objective: expected structure, ackley or sphere");
  }
  ObjectiveStack stack(fn, o, print, sentinel);
  const auto land = run_landscape(config, spec, stack.objective());
  stack.report(r);

  fs::create_directories(o.out);
  std::string s = header_line(o) + "\n";
  for (const auto& a : config.axes) s += a.name + ",";
  s += "F_A,F_B,F_C,ScUt,SR,best_final\n";
  for (const auto& c : land.cells) {
    for (double v : c.axis_values) s += format_number(v) + ",";
    s += format_number(c.utility.fa) + "," + format_number(c.utility.fb) + "," + format_number(c.utility.fc) + "," +
         format_number(c.scaled) + "," + format_number(c.success_rate) + "," + format_number(c.best_final) + "\n";
  }
  write_text(o.out / "landscape.csv", s, r);

  Json j;
  j["run"] = header_json(o);
  j["best_ut"] = land.best_ut;
  Json best;
  const auto& bc = land.cells[land.best_cell];
  for (std::size_t i = 0; i < config.axes.size(); ++i) best[config.axes[i].name] = bc.axis_values[i];
  best["F_A"] = bc.utility.fa;
  best["F_B"] = bc.utility.fb;
  best["F_C"] = bc.utility.fc;
  best["ScUt"] = bc.scaled;
  j["best_cell"] = best;
  j["cells"] = land.cells.size();
  write_text(o.out / "tune_summary.json", dump(j), r);
  log << "best utility C " << format_number(bc.utility.fc) << " at";
  for (std::size_t i = 0; i < config.axes.size(); ++i)
    log << " " << config.axes[i].name << "=" << format_number(bc.axis_values[i]);
  log << " (" << r.objective_calls << " objective evaluations, " << r.cache_hits << " cache hits)\n";
  return r;
}

CommandResult cmd_analyze(const RunOptions& o, std::ostream& log) {
  CommandResult r;
  auto problem = load_problem(o);
  const auto& spec = problem.spec;
  std::vector<std::size_t> idx(spec.size(), 0);
  if (!o.values.empty()) {
    if (o.values.size() != spec.size())
      throw ConfigError("--values: expected " + std::to_string(spec.size()) + " values");
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const auto& vals = spec.variables[i].values;
      const auto it = std::find_if(vals.begin(), vals.end(), [&](double v) { return std::abs(v - o.values[i]) < 1e-9; });
      if (it == vals.end())
        throw ConfigError("--values: " + format_number(o.values[i]) + " is not a candidate of '" +
                          spec.variables[i].name + "'");
      idx[i] = static_cast<std::size_t>(it - vals.begin());
    }
  }
  const auto cand = candidate_from_indices(idx, spec);
  const auto ev = problem.evaluator->evaluate(cand);
  r.objective_calls = 1;

  fs::create_directories(o.out);
  Json j;
  j["run"] = header_json(o);
  j["candidate"] = candidate_json(cand, spec);
  j["evaluation"] = evaluation_json(ev);
  write_text(o.out / "report.json", dump(j), r);
  write_text(o.out / "cost_breakdown.csv", breakdown_csv(o, ev.breakdown), r);
  write_text(o.out / "checks.csv", checks_csv(o, ev.checks), r);
  if (ev.sssi) write_text(o.out / "sssi_trace.csv", sssi_trace_csv(o, *ev.sssi), r);
  log << "candidate " << cand.csv_row() << " cost " << format_number(ev.cost) << " penalized "
      << format_number(ev.penalized) << "\n";
  if (ev.sentinel) {
    r.message = ev.failure;
    r.exit_code = ev.failure.rfind("analysis", 0) == 0 ? kNumericalFailure : kInfeasible;
  } else {
    r.exit_code = ev.feasible() ? kOk : kInfeasible;
  }
  return r;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

ParameterAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--axis: expected name=v1,v2,...");
  return {text.substr(0, eq), parse_number_list(text.substr(eq + 1), "--axis " + text.substr(0, eq))};
}

CommandResult run_command(const RunOptions& o, std::ostream& log) {
  try {
    if (o.command == "optimize") return cmd_optimize(o, log);
    if (o.command == "enumerate") return cmd_enumerate(o, log);
    if (o.command == "tune") return cmd_tune(o, log);
    if (o.command == "analyze") return cmd_analyze(o, log);
    throw ConfigError("unknown command '" + o.command + "'");
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return {kConfigError, 0, 0, {}, e.what()};
  } catch (const SpecError& e) {
    log << "error: " << e.what() << "\n";
    return {kConfigError, 0, 0, {}, e.what()};
  } catch (const AnalysisError& e) {
    log << "error: " << e.what() << "\n";
    return {kNumericalFailure, 0, 0, {}, e.what()};
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return {kNumericalFailure, 0, 0, {}, e.what()};
  }
}

}  // namespace rcbbo::cli
