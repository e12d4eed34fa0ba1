#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rcbbo/errors.hpp"

int main(int argc, char** argv) {
  using rcbbo::cli::RunOptions;
  RunOptions o;
  o.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{"Cost optimization of RC frames by biogeography-based optimization"};
  app.require_subcommand(1);

  std::string sssi = "off";
  std::string cache;
  bool no_cache = false;
  std::vector<std::string> axes, fixed;
  std::string values;

  auto common = [&](CLI::App* sub, bool structural_required) {
    auto* m = sub->add_option("--model", o.model, "Structural model JSON");
    auto* s = sub->add_option("--spec", o.spec, "Design-variable spec JSON");
    auto* c = sub->add_option("--costs", o.costs, "Unit-cost JSON");
    if (structural_required) {
      m->required();
      s->required();
      c->required();
    }
    sub->add_option("--soil", o.soil, "Soil profile JSON");
    sub->add_option("--sssi", sssi, "Soil-structure interaction")->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache", cache, "Persistent evaluation cache file");
    sub->add_flag("--no-cache", no_cache, "Disable the in-memory evaluation cache");
  };
  auto bbo = [&](CLI::App* sub) {
    sub->add_option("--popsize", o.popsize, "Population size");
    sub->add_option("--alpha", o.alpha, "Migration acceleration coefficient");
    sub->add_option("--mutprob", o.mutprob, "Mutation probability per species");
    sub->add_option("--keeprate", o.keeprate, "Elitism fraction");
    sub->add_option("--iterations", o.iterations, "Iterations per run");
  };

  auto* optimize = app.add_subcommand("optimize", "Search the design space with BBO");
  common(optimize, true);
  bbo(optimize);
  optimize->add_option("--stagnation", o.stagnation, "Stop after this many iterations without improvement");

  auto* enumerate = app.add_subcommand("enumerate", "Evaluate every candidate and rank them");
  common(enumerate, true);
  enumerate->add_option("--cap", o.enumerate_cap, "Largest design space to enumerate");

  auto* tune = app.add_subcommand("tune", "Utility landscape over BBO parameters");
  common(tune, false);
  tune->add_option("--objective", o.objective, "structure, ackley or sphere");
  tune->add_option("--axis", axes, "name=v1,v2,... (one or two)")->required();
  tune->add_option("--fixed", fixed, "name=value");
  tune->add_option("--runs", o.runs, "Runs per cell");
  tune->add_option("--iterations", o.iterations, "Iterations per run");
  tune->add_option("--dimension", o.dimension, "Benchmark dimension");
  tune->add_option("--bins", o.bins, "Benchmark bins per variable (odd)");

  auto* analyze = app.add_subcommand("analyze", "Evaluate one design");
  common(analyze, true);
  analyze->add_option("--values", values, "Comma-separated value per variable");

  CLI11_PARSE(app, argc, argv);
  o.command = app.get_subcommands().front()->get_name();
  o.sssi = sssi == "on";
  o.use_cache = !no_cache;
  if (!cache.empty()) o.cache = cache;

  try {
    for (const auto& a : axes) o.axes.push_back(rcbbo::cli::parse_axis(a));
    for (const auto& f : fixed) {
      const auto ax = rcbbo::cli::parse_axis(f);
      if (ax.values.size() != 1) throw rcbbo::ConfigError("--fixed " + ax.name + ": expected one value");
      o.fixed[ax.name] = ax.values.front();
    }
    if (!values.empty()) o.values = rcbbo::cli::parse_number_list(values, "--values");
  } catch (const rcbbo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rcbbo::cli::kConfigError;
  }

  const auto result = rcbbo::cli::run_command(o, std::cerr);
  return result.exit_code;
}
