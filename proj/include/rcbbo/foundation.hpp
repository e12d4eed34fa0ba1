#pragma once

#include <limits>
#include <span>
#include <vector>

#include "rcbbo/model.hpp"
#include "rcbbo/rc_design.hpp"
#include "rcbbo/settings.hpp"

namespace rcbbo {

struct BearingGeometry {
  double width = 0.0;  ///< effective width b' (the smaller plan dimension), m
  double length = std::numeric_limits<double>::infinity();  ///< effective length l'; infinite for a strip
  double depth = 0.0;      ///< embedment D, m (depth factors)
  double surcharge = 0.0;  ///< q̄ at the base level, kPa
};

struct BearingFactors {
  double Nc = 0.0;
  double Nq = 0.0;
  double Ngamma = 0.0;
};

/// Hansen (1970) bearing-capacity factors; Nc → π + 2 at φ = 0.
BearingFactors bearing_factors(double friction_deg);

/// Brinch-Hansen bearing pressure c·Nc·sc·dc + q̄·Nq·sq·dq + ½·γ·B'·Nγ·sγ·dγ, kPa.
/// Throws GeometryError when the effective width is not positive.
double bearing_capacity(const SoilStrength& soil, const BearingGeometry& geometry);

/// Hyperbolic pressure-settlement law through (R*, S̄) with asymptote q*:
/// S = p·S̄·(q*/R* − 1)/(q* − p). Throws BearingFailure for p ≥ q*.
double settlement(double p, double reference_settlement, double linearity_limit, double q_ult);

/// Secant stiffness k = p/S = (q* − p)/(S̄·(q*/R* − 1)), kPa/m.
double stiffness_coefficient(double p, double reference_settlement, double linearity_limit, double q_ult);

/// Loads applied by the column to the footing at the support node (ground
/// level). N is downward-positive; H and M are in global axes.
struct FootingLoad {
  double N = 0.0;
  double Hx = 0.0;
  double Hy = 0.0;
  double Mx = 0.0;
  double My = 0.0;
};

/// Converts a support reaction (force on the structure) into the footing load.
FootingLoad footing_load_from_reaction(const Dof6& reaction);

/// Spread footing under one column. L runs along global x, B along global y.
struct Footing {
  double L = 0.0;
  double B = 0.0;
  double D = 1.5;       ///< base depth below ground
  double t = 0.3;       ///< slab thickness
  double fc = 25.0;
  double column_x = 0.0;  ///< column plan size along x
  double column_y = 0.0;  ///< column plan size along y
  BarGroup bars_L;        ///< bottom mat, bars running along L
  BarGroup bars_B;        ///< bottom mat, bars running along B

  // Recorded by the geotechnical checks (service state)
  double pressure = 0.0;  ///< net centroid contact pressure p, kPa
  double b_eff = 0.0;
  double l_eff = 0.0;

  double rectangularity() const { return L / B; }
  double slab_volume() const { return L * B * t; }
  double stub_volume() const { return column_x * column_y * std::max(D - t, 0.0); }
  double excavation_volume(double clearance) const { return (L + 2 * clearance) * (B + 2 * clearance) * D; }
  double effective_depth(const DesignSettings& s) const;
};

struct FoundationChecks {
  std::vector<CheckResult> checks;
  bool bearing_failure = false;
  double pressure = 0.0;   ///< governing service pressure, kPa
  double q_ult = 0.0;      ///< q*_br-II for the governing service state, kPa
  double settlement = 0.0; ///< s_cdl, m

  bool pass() const;  ///< every non-advisory check passes and no bearing failure
  double worst_ratio() const;
};

/// Overturning, sliding, bearing strength (1st LS loads and soil values) and
/// overturning, linearity, settlement (2nd LS). p ≤ R* is reported as an
/// advisory check: it selects the settlement law, it does not limit the design.
FoundationChecks geotechnical_checks(const Footing& footing, const SoilProfile& soil,
                                     const SettlementParameters& settlement_params,
                                     std::span<const FootingLoad> first_ls,
                                     std::span<const FootingLoad> second_ls, const DesignSettings& settings);

/// Punching, one-way shear and flexure in both directions under the net
/// factored pressure. Throws GeometryError if the column exceeds the footing.
FoundationChecks structural_checks(const Footing& footing, std::span<const FootingLoad> ultimate,
                                   const DesignSettings& settings);

/// Selects the bottom mats for the factored moments at the column faces.
/// Returns a constructive violation if no arrangement fits.
std::vector<CheckResult> design_footing_reinforcement(Footing& footing, std::span<const FootingLoad> ultimate,
                                                      const DesignSettings& settings);

/// q*_br-II for one service load: 2nd-LS soil values, effective plan sizes
/// from the load eccentricity at the base.
double service_bearing_capacity(const Footing& footing, const SoilProfile& soil, const FootingLoad& load);

struct FootingRequest {
  double rectangularity = 1.0;
  double fc = 25.0;
  double depth = 1.5;
  double column_x = 0.0;
  double column_y = 0.0;
};

struct SizedFooting {
  Footing footing;
  FoundationChecks geotechnical;
  FoundationChecks structural;
  std::vector<CheckResult> reinforcement;
  bool feasible = true;

  std::vector<CheckResult> all_checks() const;
};

/// Smallest B on the 0.05 m grid (L = r·B) passing every geotechnical check,
/// then the smallest slab thickness passing the structural checks.
SizedFooting size_footing(const SoilProfile& soil, const SettlementParameters& settlement_params,
                          const FootingRequest& request, std::span<const FootingLoad> first_ls,
                          std::span<const FootingLoad> second_ls, const DesignSettings& settings);

/// Re-checks the slab thickness for new forces keeping the plan size fixed.
SizedFooting resize_thickness(const SoilProfile& soil, const SettlementParameters& settlement_params,
                              const Footing& plan, std::span<const FootingLoad> first_ls,
                              std::span<const FootingLoad> second_ls, const DesignSettings& settings);

}  // namespace rcbbo
