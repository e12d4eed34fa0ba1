#include "rcbbo/foundation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rcbbo/errors.hpp"

namespace rcbbo {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kConcreteWeight = 24.0;  // kN/m³

double radians(double deg) { return deg * kDeg; }

/// Keeps the more critical of two results with the same name.
void keep_worst(std::vector<CheckResult>& out, CheckResult r) {
  for (auto& existing : out) {
    if (existing.name == r.name) {
      if (r.ratio > existing.ratio || (!r.pass && existing.pass)) existing = std::move(r);
      return;
    }
  }
  out.push_back(std::move(r));
}

/// Resultants at the base centre of the footing.
struct BaseState {
  double N = 0.0;    // total vertical force including footing, stub and backfill
  double M_L = 0.0;  // moment producing eccentricity along L (about y)
  double M_B = 0.0;  // moment producing eccentricity along B (about x)
  double H = 0.0;
  double l_eff = 0.0;
  double b_eff = 0.0;
};

double self_weight(const Footing& f, const SoilProfile& soil, bool first_ls, double unit_weight) {
  const double above = std::max(f.D - f.t, 0.0);
  const double stub_area = f.column_x * f.column_y;
  const double backfill = soil.overburden(above, first_ls) * std::max(f.L * f.B - stub_area, 0.0);
  return unit_weight * (f.slab_volume() + f.stub_volume()) + backfill;
}

BaseState base_state(const Footing& f, const FootingLoad& load, double weight) {
  BaseState s;
  s.N = load.N + weight;
  // r × F with the load applied D above the base
  s.M_L = std::abs(load.My + f.D * load.Hx);
  s.M_B = std::abs(load.Mx - f.D * load.Hy);
  s.H = std::hypot(load.Hx, load.Hy);
  if (s.N > 0.0) {
    s.l_eff = f.L - 2.0 * s.M_L / s.N;
    s.b_eff = f.B - 2.0 * s.M_B / s.N;
  }
  return s;
}

BearingGeometry effective_geometry(const BaseState& s, const Footing& f, double surcharge) {
  BearingGeometry g;
  g.width = std::min(s.b_eff, s.l_eff);
  g.length = std::max(s.b_eff, s.l_eff);
  g.depth = f.D;
  g.surcharge = surcharge;
  return g;
}

CheckResult overturning(const std::string& name, const BaseState& s, double half_size, double moment,
                        double required) {
  return CheckResult::make(name, required * moment, s.N * half_size);
}

}  // namespace

BearingFactors bearing_factors(double friction_deg) {
  if (friction_deg < 0.0 || friction_deg >= 90.0) throw DomainError("friction angle outside [0, 90)");
  const double phi = radians(friction_deg);
  BearingFactors f;
  const double t = std::tan(std::numbers::pi / 4.0 + phi / 2.0);
  f.Nq = std::exp(std::numbers::pi * std::tan(phi)) * t * t;
  f.Nc = friction_deg == 0.0 ? std::numbers::pi + 2.0 : (f.Nq - 1.0) / std::tan(phi);
  f.Ngamma = 1.5 * (f.Nq - 1.0) * std::tan(phi);
  return f;
}

double bearing_capacity(const SoilStrength& soil, const BearingGeometry& g) {
  if (!(g.width > 0.0)) throw GeometryError("non-positive effective footing width");
  const double length = std::max(g.length, g.width);
  const auto f = bearing_factors(soil.friction_deg);
  const double phi = radians(soil.friction_deg);
  const double ratio = std::isinf(length) ? 0.0 : g.width / length;

  const double sc = 1.0 + f.Nq / f.Nc * ratio;
  const double sq = 1.0 + ratio * std::tan(phi);
  const double sg = std::max(0.6, 1.0 - 0.4 * ratio);

  const double dw = g.depth / g.width;
  const double k = dw <= 1.0 ? dw : std::atan(dw);
  const double dc = 1.0 + 0.4 * k;
  const double dq = 1.0 + 2.0 * std::tan(phi) * std::pow(1.0 - std::sin(phi), 2) * k;

  return soil.cohesion * f.Nc * sc * dc + g.surcharge * f.Nq * sq * dq +
         0.5 * soil.unit_weight * g.width * f.Ngamma * sg;
}

double settlement(double p, double sbar, double r_star, double q_ult) {
  if (!(sbar > 0.0) || !(r_star > 0.0)) throw DomainError("settlement parameters must be positive");
  if (!(r_star < q_ult)) throw DomainError("linearity limit must be below the bearing capacity");
  if (p < 0.0) throw DomainError("contact pressure must be >= 0");
  if (p >= q_ult) throw BearingFailure("contact pressure reached the bearing capacity");
  // grouped so that p = R* gives S̄ exactly
  return sbar * (p / r_star) * ((q_ult - r_star) / (q_ult - p));
}

double stiffness_coefficient(double p, double sbar, double r_star, double q_ult) {
  if (!(sbar > 0.0) || !(r_star > 0.0)) throw DomainError("settlement parameters must be positive");
  if (!(r_star < q_ult)) throw DomainError("linearity limit must be below the bearing capacity");
  if (p < 0.0) throw DomainError("contact pressure must be >= 0");
  if (p >= q_ult) throw BearingFailure("contact pressure reached the bearing capacity");
  return (q_ult - p) * r_star / (sbar * (q_ult - r_star));
}

FootingLoad footing_load_from_reaction(const Dof6& r) {
  return {r[2], -r[0], -r[1], -r[3], -r[4]};
}

double Footing::effective_depth(const DesignSettings& s) const {
  return t - s.footing_cover - s.footing_bar_guess / 1000.0;
}

bool FoundationChecks::pass() const {
  if (bearing_failure) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.advisory || c.pass; });
}

double FoundationChecks::worst_ratio() const {
  double worst = 0.0;
  for (const auto& c : checks)
    if (!c.advisory) worst = std::max(worst, c.ratio);
  return worst;
}

FoundationChecks geotechnical_checks(const Footing& f, const SoilProfile& soil,
                                     const SettlementParameters& sp, std::span<const FootingLoad> first_ls,
                                     std::span<const FootingLoad> second_ls, const DesignSettings& settings) {
  FoundationChecks out;
  const auto& layer = soil.layer_at(f.D);

  // 1st limit state: overturning, sliding, bearing strength
  const double w1 = self_weight(f, soil, true, kConcreteWeight);
  const double q1 = soil.overburden(f.D, true);
  for (const auto& load : first_ls) {
    const auto s = base_state(f, load, w1);
    keep_worst(out.checks, overturning("overturning_L:ls1", s, f.L / 2.0, s.M_L, settings.overturning_ls1));
    keep_worst(out.checks, overturning("overturning_B:ls1", s, f.B / 2.0, s.M_B, settings.overturning_ls1));
    if (!(s.b_eff > 0.0 && s.l_eff > 0.0)) {
      keep_worst(out.checks, CheckResult::make("sliding", s.H, 0.0).fail("non-positive effective width", kRatioCap));
      keep_worst(out.checks, CheckResult::make("bearing", s.N, 0.0).fail("non-positive effective width", kRatioCap));
      continue;
    }
    const double phi = radians(layer.first_ls.friction_deg);
    const double sliding_cap = settings.sliding_cohesion_factor * s.b_eff * s.l_eff * layer.first_ls.cohesion +
                               s.N * std::tan(phi);
    keep_worst(out.checks, CheckResult::make("sliding", s.H, sliding_cap));
    const double q_br = bearing_capacity(layer.first_ls, effective_geometry(s, f, q1));
    keep_worst(out.checks, CheckResult::make("bearing", s.N, q_br * s.b_eff * s.l_eff));
  }

  // 2nd limit state: overturning, linearity, settlement
  const double w2 = self_weight(f, soil, false, kConcreteWeight);
  const double q2 = soil.overburden(f.D, false);
  double worst_settlement = -1.0;
  for (const auto& load : second_ls) {
    const auto s = base_state(f, load, w2);
    keep_worst(out.checks, overturning("overturning_L:ls2", s, f.L / 2.0, s.M_L, settings.overturning_ls2));
    keep_worst(out.checks, overturning("overturning_B:ls2", s, f.B / 2.0, s.M_B, settings.overturning_ls2));
    const double p = std::max(load.N, 0.0) / (f.L * f.B);
    auto linearity = CheckResult::make("linearity", p, sp.linearity_limit);
    linearity.advisory = true;
    keep_worst(out.checks, linearity);

    if (!(s.b_eff > 0.0 && s.l_eff > 0.0)) {
      keep_worst(out.checks,
                 CheckResult::make("settlement", 1.0, 0.0).fail("non-positive effective width", kRatioCap));
      continue;
    }
    const double q_ult = bearing_capacity(layer.second_ls, effective_geometry(s, f, q2));
    double s_cdl = 0.0;
    if (!(q_ult > sp.linearity_limit)) {
      keep_worst(out.checks, CheckResult::make("settlement", sp.linearity_limit, q_ult)
                                 .fail("bearing capacity below the linearity limit", sp.linearity_limit / q_ult));
      s_cdl = std::numeric_limits<double>::infinity();
    } else if (p >= q_ult) {
      out.bearing_failure = true;
      keep_worst(out.checks, CheckResult::make("settlement", p, q_ult).fail("bearing failure", kRatioCap));
      s_cdl = std::numeric_limits<double>::infinity();
    } else {
      s_cdl = settlement(p, sp.reference_settlement, sp.linearity_limit, q_ult);
      keep_worst(out.checks, CheckResult::make("settlement", s_cdl, soil.settlement_limit));
    }
    if (s_cdl > worst_settlement) {
      worst_settlement = s_cdl;
      out.pressure = p;
      out.q_ult = q_ult;
      out.settlement = s_cdl;
    }
  }
  return out;
}

namespace {

double net_pressure(const Footing& f, const FootingLoad& load) {
  const double M_L = std::abs(load.My + f.D * load.Hx);
  const double M_B = std::abs(load.Mx - f.D * load.Hy);
  return std::max(load.N, 0.0) / (f.L * f.B) + 6.0 * M_L / (f.B * f.L * f.L) + 6.0 * M_B / (f.L * f.B * f.B);
}

double governing_pressure(const Footing& f, std::span<const FootingLoad> loads) {
  double qu = 0.0;
  for (const auto& l : loads) qu = std::max(qu, net_pressure(f, l));
  return qu;
}

void require_column_fits(const Footing& f) {
  if (f.column_x > f.L || f.column_y > f.B) throw GeometryError("column larger than footing");
}

double flexural_capacity(const Footing& f, double width, const BarGroup& bars, const DesignSettings& s) {
  if (bars.count <= 0) return 0.0;
  const SteelLayer layer{bars.area(), f.effective_depth(s)};
  const auto st = pure_bending(width, f.t, f.fc, s.fy, s.steel_modulus, std::span(&layer, 1));
  return s.phi_flexure * std::max(st.M, 0.0);
}

FaceConstraints footing_face(double width, const DesignSettings& s) {
  FaceConstraints face;
  face.width = width;
  face.cover = s.footing_cover;
  face.stirrup_diameter = 0;
  face.min_bars = 2;
  face.max_bars = static_cast<int>(width / 0.05) + 2;
  face.min_clear = s.min_clear_spacing;
  face.max_spacing = s.footing_max_bar_spacing;
  face.catalog = s.bar_catalog;
  return face;
}

}  // namespace

FoundationChecks structural_checks(const Footing& f, std::span<const FootingLoad> ultimate,
                                   const DesignSettings& s) {
  require_column_fits(f);
  FoundationChecks out;
  const double qu = governing_pressure(f, ultimate);
  const double d = f.effective_depth(s);
  if (!(d > 0.0)) throw GeometryError("footing thickness leaves no effective depth");

  const double px = std::min(f.column_x + d, f.L);
  const double py = std::min(f.column_y + d, f.B);
  const double punch_force = qu * std::max(f.L * f.B - px * py, 0.0);
  const double perimeter = 2.0 * (f.column_x + f.column_y + 2.0 * d);
  const double tau = punch_force / (perimeter * d);
  out.checks.push_back(CheckResult::make("punching", tau, s.phi_shear * 0.33 * std::sqrt(f.fc) * 1000.0));

  const double arm_L = (f.L - f.column_x) / 2.0;
  const double arm_B = (f.B - f.column_y) / 2.0;
  out.checks.push_back(CheckResult::make("one_way_shear_L", qu * f.B * std::max(arm_L - d, 0.0),
                                         s.phi_shear * concrete_shear_capacity(f.fc, f.B, d)));
  out.checks.push_back(CheckResult::make("one_way_shear_B", qu * f.L * std::max(arm_B - d, 0.0),
                                         s.phi_shear * concrete_shear_capacity(f.fc, f.L, d)));
  out.checks.push_back(
      CheckResult::make("flexure_L", qu * f.B * arm_L * arm_L / 2.0, flexural_capacity(f, f.B, f.bars_L, s)));
  out.checks.push_back(
      CheckResult::make("flexure_B", qu * f.L * arm_B * arm_B / 2.0, flexural_capacity(f, f.L, f.bars_B, s)));
  return out;
}

std::vector<CheckResult> design_footing_reinforcement(Footing& f, std::span<const FootingLoad> ultimate,
                                                      const DesignSettings& s) {
  require_column_fits(f);
  std::vector<CheckResult> violations;
  const double qu = governing_pressure(f, ultimate);
  const double d = f.effective_depth(s);

  auto design = [&](const char* name, double width, double arm, BarGroup& bars) {
    const double Mu = qu * width * arm * arm / 2.0;
    const double minimum = s.footing_min_ratio * width * f.t;
    const auto face = footing_face(width, s);
    const auto needed = d > 0.0 ? required_flexural_steel(Mu, width, d, f.fc, s.fy, s.phi_flexure) : std::nullopt;
    const auto options = feasible_arrangements(face);
    if (options.empty()) throw GeometryError("footing too narrow for any bar arrangement");
    if (!needed) {
      bars = options.back();
      violations.push_back(CheckResult::make(name, Mu, flexural_capacity(f, width, bars, s))
                               .fail("slab too thin for the factored moment", 1.0 + 1e-3));
      return;
    }
    const double area = std::max(*needed, minimum);
    if (auto g = select_reinforcement(area, face)) {
      bars = *g;
    } else {
      bars = options.back();
      violations.push_back(
          CheckResult::make(name, area, bars.area()).fail("no bar arrangement provides the area", 1.0 + 1e-3));
    }
  };
  design("footing_bars_L", f.B, (f.L - f.column_x) / 2.0, f.bars_L);
  design("footing_bars_B", f.L, (f.B - f.column_y) / 2.0, f.bars_B);
  return violations;
}

double service_bearing_capacity(const Footing& f, const SoilProfile& soil, const FootingLoad& load) {
  const auto s = base_state(f, load, self_weight(f, soil, false, kConcreteWeight));
  if (!(s.b_eff > 0.0 && s.l_eff > 0.0)) throw GeometryError("non-positive effective footing width");
  return bearing_capacity(soil.layer_at(f.D).second_ls, effective_geometry(s, f, soil.overburden(f.D, false)));
}

std::vector<CheckResult> SizedFooting::all_checks() const {
  std::vector<CheckResult> out = geotechnical.checks;
  out.insert(out.end(), structural.checks.begin(), structural.checks.end());
  out.insert(out.end(), reinforcement.begin(), reinforcement.end());
  return out;
}

namespace {

bool structural_ok(const SizedFooting& r) {
  return r.structural.pass() && r.reinforcement.empty();
}

void choose_thickness(SizedFooting& r, std::span<const FootingLoad> ultimate, const DesignSettings& s) {
  const long first = std::lround(std::ceil(s.footing_min_thickness / s.size_step - 1e-9));
  const long last = std::lround(std::floor(s.footing_max_thickness / s.size_step + 1e-9));
  for (long k = first; k <= last; ++k) {
    r.footing.t = k * s.size_step;
    if (r.footing.t >= r.footing.D) break;
    if (!(r.footing.effective_depth(s) > 0.0)) continue;
    r.reinforcement = design_footing_reinforcement(r.footing, ultimate, s);
    r.structural = structural_checks(r.footing, ultimate, s);
    if (structural_ok(r)) return;
  }
}

void finish(SizedFooting& r, const SoilProfile& soil, const SettlementParameters& sp,
            std::span<const FootingLoad> first_ls, std::span<const FootingLoad> second_ls,
            const DesignSettings& s) {
  r.geotechnical = geotechnical_checks(r.footing, soil, sp, first_ls, second_ls, s);
  r.footing.pressure = r.geotechnical.pressure;
  r.feasible = r.geotechnical.pass() && structural_ok(r);
}

}  // namespace

SizedFooting size_footing(const SoilProfile& soil, const SettlementParameters& sp, const FootingRequest& req,
                          std::span<const FootingLoad> first_ls, std::span<const FootingLoad> second_ls,
                          const DesignSettings& s) {
  if (!(req.rectangularity > 0.0)) throw DomainError("rectangularity must be > 0");
  SizedFooting r;
  auto& f = r.footing;
  f.D = req.depth;
  f.fc = req.fc;
  f.column_x = req.column_x;
  f.column_y = req.column_y;
  f.t = s.footing_min_thickness;

  const long first = std::lround(std::ceil(s.footing_min_width / s.size_step - 1e-9));
  const long last = std::lround(std::floor(s.footing_max_width / s.size_step + 1e-9));
  bool found = false;
  for (long k = first; k <= last && !found; ++k) {
    f.B = k * s.size_step;
    f.L = req.rectangularity * f.B;
    if (f.column_x > f.L || f.column_y > f.B) continue;
    found = geotechnical_checks(f, soil, sp, first_ls, second_ls, s).pass();
  }
  if (!found) {
    f.B = last * s.size_step;
    f.L = req.rectangularity * f.B;
  }
  choose_thickness(r, first_ls, s);
  finish(r, soil, sp, first_ls, second_ls, s);
  r.feasible = r.feasible && found;
  return r;
}

SizedFooting resize_thickness(const SoilProfile& soil, const SettlementParameters& sp, const Footing& plan,
                              std::span<const FootingLoad> first_ls, std::span<const FootingLoad> second_ls,
                              const DesignSettings& s) {
  SizedFooting r;
  r.footing = plan;
  choose_thickness(r, first_ls, s);
  finish(r, soil, sp, first_ls, second_ls, s);
  return r;
}

}  // namespace rcbbo
