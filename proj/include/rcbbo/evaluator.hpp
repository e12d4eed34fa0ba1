#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcbbo/cost.hpp"
#include "rcbbo/foundation.hpp"
#include "rcbbo/frame_solver.hpp"
#include "rcbbo/model.hpp"
#include "rcbbo/rc_design.hpp"
#include "rcbbo/settings.hpp"
#include "rcbbo/sssi.hpp"

namespace rcbbo {

struct MemberReport {
  int id = 0;
  MemberRole role = MemberRole::beam;
  double length = 0.0;
  MemberSection section;
  ReinforcementLayout beam;     ///< beams only
  ColumnReinforcement column;   ///< columns only
  std::vector<CheckResult> checks;
};

struct FootingReport {
  int node = 0;
  std::string group;
  SizedFooting sized;
};

struct Evaluation {
  double cost = 0.0;       ///< direct cost F
  double penalized = 0.0;  ///< F', or the sentinel
  bool sentinel = false;
  std::string failure;     ///< reason for the sentinel
  CostBreakdown breakdown;
  std::vector<CheckResult> checks;  ///< every check, names prefixed by element
  std::vector<MemberReport> members;
  std::vector<FootingReport> footings;
  std::optional<SssiResult> sssi;

  /// No sentinel and every non-advisory check passes.
  bool feasible() const;
};

/// Inputs of one SSSI iteration for a candidate, exposed for diagnostics.
struct SssiSetup {
  std::vector<MemberSection> sections;
  std::vector<std::size_t> footing_supports;
  std::vector<Footing> footings;
  const Combination* combination = nullptr;
};

/// Candidate → sections → analysis → (SSSI) → design → checks → cost.
/// Immutable after construction; evaluate() may be called concurrently.
class StructuralEvaluator {
 public:
  StructuralEvaluator(StructuralModel model, DesignVariableSpec spec, std::optional<SoilProfile> soil,
                      UnitCosts costs, DesignSettings settings, bool sssi);

  Evaluation evaluate(const DesignCandidate& candidate) const;
  double objective(const DesignCandidate& candidate) const { return evaluate(candidate).penalized; }

  std::vector<MemberSection> sections(const DesignCandidate& candidate) const;
  /// Footings sized from the fixed-support analysis, ready for the iteration.
  SssiSetup sssi_setup(const DesignCandidate& candidate) const;

  const StructuralModel& model() const { return model_; }
  const DesignVariableSpec& spec() const { return spec_; }
  const DesignSettings& settings() const { return settings_; }
  bool sssi_enabled() const { return sssi_; }

 private:
  struct Forces {
    std::vector<InternalForces> by_combination;  // model.combinations order
  };

  Forces analyze(const std::vector<MemberSection>& sections, const std::vector<SupportStiffness>& supports) const;
  std::vector<FootingReport> size_footings(const DesignCandidate& candidate,
                                           const std::vector<MemberSection>& sections, const Forces& forces) const;
  const Combination& sssi_combination() const;
  Evaluation evaluate_unchecked(const DesignCandidate& candidate) const;

  StructuralModel model_;
  DesignVariableSpec spec_;
  std::optional<SoilProfile> soil_;
  UnitCosts costs_;
  DesignSettings settings_;
  bool sssi_ = false;
  std::vector<std::size_t> footing_supports_;
};

}  // namespace rcbbo
