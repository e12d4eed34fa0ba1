#include "rcbbo/evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "rcbbo/errors.hpp"

namespace rcbbo {

namespace {

double member_length(const StructuralModel& m, const Member& mem) {
  const auto& a = m.nodes[*m.node_index(mem.start)].xyz;
  const auto& b = m.nodes[*m.node_index(mem.end)].xyz;
  return std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
}

bool is_service(const Combination& c) { return c.kind != CombinationKind::strength; }

/// Replaces an entry of the same name when the new result is more critical.
void keep_worst(std::vector<CheckResult>& out, CheckResult r) {
  for (auto& e : out)
    if (e.name == r.name) {
      if (r.ratio > e.ratio) e = std::move(r);
      return;
    }
  out.push_back(std::move(r));
}

void append_prefixed(std::vector<CheckResult>& out, const std::vector<CheckResult>& in, const std::string& prefix) {
  for (auto c : in) {
    c.name = prefix + c.name;
    out.push_back(std::move(c));
  }
}

}  // namespace

bool Evaluation::feasible() const {
  if (sentinel) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.advisory || c.pass; });
}

StructuralEvaluator::StructuralEvaluator(StructuralModel model, DesignVariableSpec spec,
                                         std::optional<SoilProfile> soil, UnitCosts costs,
                                         DesignSettings settings, bool sssi)
    : model_(std::move(model)),
      spec_(std::move(spec)),
      soil_(std::move(soil)),
      costs_(std::move(costs)),
      settings_(std::move(settings)),
      sssi_(sssi) {
  if (auto errors = validate_model(model_); !errors.empty()) throw ConfigError(errors.front());
  validate_spec(spec_);
  if (auto errors = validate_bindings(model_, spec_); !errors.empty()) throw ConfigError(errors.front());
  if (std::none_of(model_.combinations.begin(), model_.combinations.end(),
                   [](const Combination& c) { return c.kind == CombinationKind::strength; }))
    throw ConfigError("combinations: at least one strength combination is required");

  for (std::size_t i = 0; i < model_.supports.size(); ++i)
    if (!model_.supports[i].footing_group.empty()) footing_supports_.push_back(i);
  if (!footing_supports_.empty()) {
    if (!soil_) throw ConfigError("soil: the model has footings but no soil profile was given");
    if (auto errors = validate_soil(*soil_); !errors.empty()) throw ConfigError(errors.front());
  }
  if (sssi_) {
    if (footing_supports_.empty()) throw ConfigError("sssi: the model has no footing supports");
    sssi_combination();
  }
}

const Combination& StructuralEvaluator::sssi_combination() const {
  for (const auto& c : model_.combinations) {
    if (!settings_.sssi_combination.empty() ? c.name == settings_.sssi_combination
                                            : c.kind == CombinationKind::service)
      return c;
  }
  throw ConfigError(settings_.sssi_combination.empty()
                        ? "settings.sssi_combination: no service combination to iterate on"
                        : "settings.sssi_combination: unknown combination '" + settings_.sssi_combination + "'");
}

std::vector<MemberSection> StructuralEvaluator::sections(const DesignCandidate& c) const {
  std::vector<MemberSection> out;
  out.reserve(model_.members.size());
  for (const auto& m : model_.members) {
    const auto* g = spec_.section_group(m.group);
    if (!g) throw ConfigError("members[" + std::to_string(m.id) + "].group: unknown group '" + m.group + "'");
    out.push_back(make_section(c.resolve(g->width, spec_), c.resolve(g->height, spec_), c.resolve(g->grade, spec_)));
  }
  return out;
}

StructuralEvaluator::Forces StructuralEvaluator::analyze(const std::vector<MemberSection>& sections,
                                                         const std::vector<SupportStiffness>& supports) const {
  const FrameAnalysis analysis(model_, sections, supports);
  Forces f;
  for (const auto& c : model_.combinations) f.by_combination.push_back(analysis.solve(c));
  return f;
}

std::vector<FootingReport> StructuralEvaluator::size_footings(const DesignCandidate& c,
                                                              const std::vector<MemberSection>& sections,
                                                              const Forces& forces) const {
  std::vector<FootingReport> out;
  for (const auto si : footing_supports_) {
    const auto& support = model_.supports[si];
    const auto* group = spec_.footing_group(support.footing_group);
    if (!group) throw ConfigError("supports: unknown footing group '" + support.footing_group + "'");

    FootingRequest req;
    req.rectangularity = c.resolve(group->rectangularity, spec_);
    req.fc = c.resolve(group->grade, spec_);
    req.depth = group->depth;
    for (std::size_t mi = 0; mi < model_.members.size(); ++mi) {
      const auto& m = model_.members[mi];
      if (m.role != MemberRole::column || (m.start != support.node && m.end != support.node)) continue;
      // h lies along the depth direction, global X unless overridden
      bool h_along_x = true;
      if (m.depth_direction) h_along_x = std::abs((*m.depth_direction)[0]) >= std::abs((*m.depth_direction)[1]);
      req.column_x = h_along_x ? sections[mi].h : sections[mi].b;
      req.column_y = h_along_x ? sections[mi].b : sections[mi].h;
      break;
    }

    std::vector<FootingLoad> first, second;
    for (std::size_t ci = 0; ci < model_.combinations.size(); ++ci) {
      const auto load = footing_load_from_reaction(forces.by_combination[ci].reactions[si]);
      (is_service(model_.combinations[ci]) ? second : first).push_back(load);
    }
    const auto& params = soil_->settlement_at(support.node);
    out.push_back({support.node, support.footing_group, size_footing(*soil_, params, req, first, second, settings_)});
  }
  return out;
}

SssiSetup StructuralEvaluator::sssi_setup(const DesignCandidate& c) const {
  SssiSetup setup;
  setup.sections = sections(c);
  std::vector<SupportStiffness> fixed;
  for (const auto& s : model_.supports) fixed.push_back(SupportStiffness::from(s));
  const auto forces = analyze(setup.sections, fixed);
  for (auto& r : size_footings(c, setup.sections, forces)) setup.footings.push_back(r.sized.footing);
  setup.footing_supports = footing_supports_;
  setup.combination = &sssi_combination();
  return setup;
}

Evaluation StructuralEvaluator::evaluate(const DesignCandidate& c) const {
  try {
    return evaluate_unchecked(c);
  } catch (const AnalysisError& e) {
    Evaluation ev;
    ev.sentinel = true;
    ev.failure = std::string("analysis: ") + e.what();
    ev.penalized = settings_.infeasible_cost;
    return ev;
  } catch (const BearingFailure& e) {
    Evaluation ev;
    ev.sentinel = true;
    ev.failure = std::string("bearing failure: ") + e.what();
    ev.penalized = settings_.infeasible_cost;
    return ev;
  } catch (const GeometryError& e) {
    Evaluation ev;
    ev.sentinel = true;
    ev.failure = std::string("geometry: ") + e.what();
    ev.penalized = settings_.infeasible_cost;
    return ev;
  }
}

Evaluation StructuralEvaluator::evaluate_unchecked(const DesignCandidate& c) const {
  Evaluation ev;
  const auto secs = sections(c);
  std::vector<SupportStiffness> supports;
  for (const auto& s : model_.supports) supports.push_back(SupportStiffness::from(s));
  auto forces = analyze(secs, supports);

  if (!footing_supports_.empty()) ev.footings = size_footings(c, secs, forces);

  if (sssi_) {
    std::vector<Footing> plans;
    for (const auto& r : ev.footings) plans.push_back(r.sized.footing);
    auto result = iterate_sssi(model_, secs, *soil_, footing_supports_, plans, sssi_combination(),
                               SssiOptions::from(settings_));
    if (result.bearing_failure) {
      ev.sentinel = true;
      ev.failure = "bearing failure during soil-structure iteration";
      ev.penalized = settings_.infeasible_cost;
      ev.sssi = std::move(result);
      return ev;
    }
    if (!result.converged) {
      ev.checks.push_back(CheckResult::make("sssi_convergence", 1.0, 1.0)
                              .fail("no convergence within " + std::to_string(result.iterations) + " analyses",
                                    1.0 + settings_.sssi_tolerance));
    }
    forces = analyze(secs, result.supports);
    ev.sssi = std::move(result);
    ev.footings = size_footings(c, secs, forces);
  }

  for (const auto& f : ev.footings) {
    if (f.sized.geotechnical.bearing_failure) {
      ev.sentinel = true;
      ev.failure = "bearing failure under footing at node " + std::to_string(f.node);
      ev.penalized = settings_.infeasible_cost;
      return ev;
    }
  }

  // Member design under the strength combinations
  QuantityTakeoff takeoff;
  for (std::size_t mi = 0; mi < model_.members.size(); ++mi) {
    const auto& m = model_.members[mi];
    MemberReport rep;
    rep.id = m.id;
    rep.role = m.role;
    rep.length = member_length(model_, m);
    rep.section = secs[mi];
    if (m.role == MemberRole::beam) {
      BeamDemand d;
      for (std::size_t ci = 0; ci < model_.combinations.size(); ++ci) {
        if (is_service(model_.combinations[ci])) continue;
        for (const auto& st : forces.by_combination[ci].members[mi].stations) {
          d.sagging = std::max(d.sagging, st.Mw);
          d.hogging = std::max(d.hogging, -st.Mw);
          d.shear = std::max(d.shear, std::abs(st.Vv));
        }
      }
      auto design = design_beam(secs[mi], d, settings_);
      rep.beam = design.layout;
      rep.checks = std::move(design.checks);
      takeoff.items.push_back(beam_quantities(m.id, rep.length, secs[mi], rep.beam, settings_));
    } else {
      std::vector<ColumnDemand> demands;
      for (std::size_t ci = 0; ci < model_.combinations.size(); ++ci) {
        if (is_service(model_.combinations[ci])) continue;
        for (const auto& st : forces.by_combination[ci].members[mi].stations)
          demands.push_back({-st.N, std::abs(st.Mw), std::abs(st.Mv)});
      }
      auto design = design_column(secs[mi], demands, settings_);
      rep.column = design.layout;
      rep.checks = std::move(design.checks);
      takeoff.items.push_back(column_quantities(m.id, rep.length, secs[mi], rep.column, settings_));
    }
    append_prefixed(ev.checks, rep.checks, "m" + std::to_string(m.id) + ".");
    ev.members.push_back(std::move(rep));
  }

  // Serviceability: deflections under service, drift under wind (service when no wind)
  const bool has_wind = std::any_of(model_.combinations.begin(), model_.combinations.end(),
                                    [](const Combination& c) { return c.kind == CombinationKind::wind; });
  std::vector<CheckResult> service;
  for (std::size_t ci = 0; ci < model_.combinations.size(); ++ci) {
    const auto kind = model_.combinations[ci].kind;
    if (kind == CombinationKind::strength) continue;
    for (auto& r : check_serviceability(forces.by_combination[ci], model_, settings_)) {
      const bool drift = r.name == "top_displacement";
      const bool wanted = drift ? (kind == CombinationKind::wind || !has_wind) : kind == CombinationKind::service;
      if (wanted) keep_worst(service, std::move(r));
    }
  }
  ev.checks.insert(ev.checks.end(), service.begin(), service.end());

  for (const auto& f : ev.footings) {
    append_prefixed(ev.checks, f.sized.all_checks(), "f" + std::to_string(f.node) + ".");
    if (!f.sized.feasible && f.sized.footing.B >= settings_.footing_max_width - 1e-9) {
      ev.checks.push_back(CheckResult::make("f" + std::to_string(f.node) + ".size_cap", 1.0, 1.0)
                              .fail("no footing size within the cap", 1.0 + 1e-3));
    }
    takeoff.items.push_back(footing_quantities(f.node, f.sized.footing, settings_));
  }

  ev.breakdown = direct_cost(takeoff, costs_);
  ev.cost = ev.breakdown.total;
  ev.penalized = penalize(ev.cost, ev.checks, settings_);
  return ev;
}

}  // namespace rcbbo
