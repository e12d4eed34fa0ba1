#include "rcbbo/sssi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcbbo/errors.hpp"

namespace rcbbo {

double next_stiffness(double pressure, double settlement_m, const SettlementParameters& params, double q_ult) {
  if (settlement_m < 0.0) return 0.0;
  return stiffness_coefficient(std::max(pressure, 0.0), params.reference_settlement, params.linearity_limit,
                               q_ult);
}

std::vector<SupportStiffness> winkler_supports(const StructuralModel& model,
                                               std::span<const std::size_t> footing_supports,
                                               std::span<const Footing> footings, std::span<const double> k) {
  if (footing_supports.size() != footings.size() || footings.size() != k.size())
    throw DomainError("footing, support and stiffness lists differ in length");
  std::vector<SupportStiffness> out;
  out.reserve(model.supports.size());
  for (const auto& s : model.supports) out.push_back(SupportStiffness::from(s));
  for (std::size_t i = 0; i < footings.size(); ++i) {
    const auto& f = footings[i];
    auto& s = out.at(footing_supports[i]);
    s.restrained = {true, true, false, false, false, true};
    s.springs = {0.0, 0.0, k[i] * f.L * f.B, k[i] * f.L * f.B * f.B * f.B / 12.0,
                 k[i] * f.B * f.L * f.L * f.L / 12.0, 0.0};
  }
  return out;
}

namespace {

struct StepResult {
  std::vector<double> pressure;
  std::vector<double> settlement;
  std::vector<FootingLoad> loads;
};

StepResult measure(const StructuralModel& model, const InternalForces& forces,
                   std::span<const std::size_t> footing_supports, std::span<const Footing> footings) {
  StepResult r;
  for (std::size_t i = 0; i < footings.size(); ++i) {
    const auto si = footing_supports[i];
    const auto load = footing_load_from_reaction(forces.reactions.at(si));
    const auto node = *model.node_index(model.supports[si].node);
    r.loads.push_back(load);
    r.pressure.push_back(load.N / (footings[i].L * footings[i].B));
    r.settlement.push_back(-forces.displacements.at(node)[2]);
  }
  return r;
}

bool close(double now, double before, double tol) {
  const double scale = std::abs(before);
  if (scale == 0.0) return now == 0.0;
  return std::abs(now - before) / scale < tol;
}

}  // namespace

SssiResult iterate_sssi(const StructuralModel& model, const std::vector<MemberSection>& sections,
                        const SoilProfile& soil, std::span<const std::size_t> footing_supports,
                        std::span<const Footing> footings, const Combination& combination,
                        const SssiOptions& options) {
  if (!(options.tolerance > 0.0)) throw DomainError("SSSI tolerance must be > 0");
  if (options.max_iterations < 1) throw DomainError("SSSI max_iterations must be >= 1");
  const std::size_t n = footings.size();
  SssiResult result;
  result.states.resize(n);

  std::vector<SupportStiffness> fixed;
  for (const auto& s : model.supports) fixed.push_back(SupportStiffness::from(s));
  auto forces = FrameAnalysis(model, sections, fixed).solve(combination);
  result.iterations = 1;

  // Coefficients for the next analysis from the current one
  std::vector<double> k(n);
  std::vector<double> previous_settlement(n, 0.0);
  auto update = [&](const StepResult& step, bool first) -> bool {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& params = soil.settlement_at(model.supports[footing_supports[i]].node);
      const double q_ult = service_bearing_capacity(footings[i], soil, step.loads[i]);
      // The rigid-support step has no settlement; a tensile reaction marks uplift.
      const double s = first ? (step.pressure[i] < 0.0 ? -1.0 : 0.0) : step.settlement[i];
      double next;
      try {
        next = next_stiffness(step.pressure[i], s, params, q_ult);
      } catch (const BearingFailure&) {
        result.bearing_failure = true;
        return false;
      }
      auto& st = result.states[i];
      st.pressure = step.pressure[i];
      st.settlement = step.settlement[i];
      st.q_ult = q_ult;
      st.k = next;
    }
    return true;
  };

  auto record = [&](int iteration, const StepResult& step, const std::vector<double>& used_k) {
    for (std::size_t i = 0; i < n; ++i)
      result.trace.push_back({iteration, i, model.supports[footing_supports[i]].node, used_k[i],
                              step.settlement[i] + 0.0, step.pressure[i]});
  };

  auto step = measure(model, forces, footing_supports, footings);
  record(1, step, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  if (!update(step, true)) return result;
  for (std::size_t i = 0; i < n; ++i) k[i] = result.states[i].k;

  while (true) {
    if (result.iterations >= options.max_iterations) break;
    const auto supports = winkler_supports(model, footing_supports, footings, k);
    forces = FrameAnalysis(model, sections, supports).solve(combination);
    ++result.iterations;
    const auto now = measure(model, forces, footing_supports, footings);
    record(result.iterations, now, k);
    if (!update(now, false)) return result;

    bool converged = true;
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = result.states[i].k;
      if (result.iterations > options.damping_after) next[i] = 0.5 * (next[i] + k[i]);
      const bool uplift = k[i] == 0.0 || next[i] == 0.0;
      const bool ok = uplift ? (now.settlement[i] < 0.0 && previous_settlement[i] < 0.0
                                    ? close(now.settlement[i], previous_settlement[i], options.tolerance)
                                    : k[i] == next[i])
                             : close(next[i], k[i], options.tolerance);
      converged = converged && ok;
      previous_settlement[i] = now.settlement[i];
    }
    k = next;
    for (std::size_t i = 0; i < n; ++i) result.states[i].k = k[i];
    if (converged) {
      result.converged = true;
      break;
    }
  }
  result.supports = winkler_supports(model, footing_supports, footings, k);
  return result;
}

}  // namespace rcbbo
