#pragma once

#include <span>
#include <vector>

#include "rcbbo/foundation.hpp"
#include "rcbbo/frame_solver.hpp"

namespace rcbbo {

/// State of one footing at one iteration.
struct FootingState {
  double k = 0.0;           ///< secant coefficient, kPa/m
  double pressure = 0.0;    ///< P, kPa
  double settlement = 0.0;  ///< S, m (downward positive)
  double q_ult = 0.0;       ///< q*_br-II used for k, kPa

  double spring(const Footing& f) const { return k * f.L * f.B; }  ///< kN/m
};

struct SssiTraceRow {
  int iteration = 0;
  std::size_t footing = 0;
  int node = 0;
  double k = 0.0;  ///< coefficient used by this analysis; infinite for the fixed-support one
  double settlement = 0.0;
  double pressure = 0.0;
};

struct SssiOptions {
  double tolerance = 0.05;
  int max_iterations = 20;
  int damping_after = 10;  ///< average successive k beyond this iteration

  static SssiOptions from(const DesignSettings& s) {
    return {s.sssi_tolerance, s.sssi_max_iterations, s.sssi_damping_after};
  }
};

struct SssiResult {
  std::vector<FootingState> states;         ///< converged k per footing
  std::vector<SupportStiffness> supports;   ///< model-aligned supports for the final analysis
  int iterations = 0;                       ///< analyses performed, the fixed-support one included
  bool converged = false;
  bool bearing_failure = false;
  std::vector<SssiTraceRow> trace;
};

/// Next coefficient from the current step: zero when the footing lifted
/// (S < 0), otherwise (q* − P)/(S̄·(q*/R* − 1)). Throws BearingFailure for P ≥ q*.
double next_stiffness(double pressure, double settlement, const SettlementParameters& params, double q_ult);

/// Winkler springs for footing supports: vertical k·L·B, rocking k·L·B³/12
/// about x and k·B·L³/12 about y; horizontal translation and twist stay
/// restrained. Other supports keep their model conditions.
std::vector<SupportStiffness> winkler_supports(const StructuralModel& model,
                                               std::span<const std::size_t> footing_supports,
                                               std::span<const Footing> footings, std::span<const double> k);

/// Fixed-point iteration between the frame analysis and the secant
/// coefficients under one combination. Footing plans are held fixed; the
/// iteration stops when every k changes by less than the tolerance
/// (uplifted footings are compared on settlement).
SssiResult iterate_sssi(const StructuralModel& model, const std::vector<MemberSection>& sections,
                        const SoilProfile& soil, std::span<const std::size_t> footing_supports,
                        std::span<const Footing> footings, const Combination& combination,
                        const SssiOptions& options = {});

}  // namespace rcbbo
