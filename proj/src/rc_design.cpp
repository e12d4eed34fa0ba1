#include "rcbbo/rc_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rcbbo/errors.hpp"

namespace rcbbo {

namespace {

constexpr double kConcreteStrain = 0.003;
constexpr double kTensionControlled = 0.005;

double mm(int diameter) { return diameter / 1000.0; }

double steel_stress(double strain, double fy, double es) {
  return std::clamp(es * strain, -fy, fy);
}

/// φ varies linearly from the compression-controlled value at ε_t = ε_y to the
/// flexural value at ε_t = 0.005.
double strength_factor(double eps_t, double fy, double es, const DesignSettings& s) {
  const double eps_y = fy / es;
  if (eps_t >= kTensionControlled) return s.phi_flexure;
  if (eps_t <= eps_y) return s.phi_compression;
  return s.phi_compression +
         (s.phi_flexure - s.phi_compression) * (eps_t - eps_y) / (kTensionControlled - eps_y);
}

}  // namespace

CheckResult CheckResult::make(std::string name, double demand, double capacity) {
  CheckResult r;
  r.name = std::move(name);
  r.demand = demand;
  r.capacity = capacity;
  if (!(demand > 0.0))
    r.ratio = 0.0;
  else if (!(capacity > 0.0))
    r.ratio = kRatioCap;
  else
    r.ratio = std::min(demand / capacity, kRatioCap);
  r.pass = r.ratio <= 1.0 + 1e-9;
  return r;
}

CheckResult& CheckResult::fail(std::string why, double ratio_floor) {
  reason = std::move(why);
  ratio = std::max(ratio, std::min(ratio_floor, kRatioCap));
  if (ratio <= 1.0 + 1e-9) ratio = 1.0 + 1e-6;
  pass = false;
  return *this;
}

double bar_area(int diameter_mm) {
  const double d = mm(diameter_mm);
  return std::numbers::pi * d * d / 4.0;
}

double stress_block_factor(double fc) {
  if (fc <= 28.0) return 0.85;
  return std::max(0.65, 0.85 - 0.05 * (fc - 28.0) / 7.0);
}

SectionState section_state(double width, double depth, double fc, double fy, double es,
                           std::span<const SteelLayer> layers, double c) {
  SectionState st;
  st.c = c;
  const double a = std::min(stress_block_factor(fc) * c, depth);
  const double cc = 0.85 * fc * 1000.0 * a * width;
  st.P = cc;
  st.M = cc * (depth / 2.0 - a / 2.0);
  double deepest = -1.0;
  for (const auto& layer : layers) {
    const double strain = kConcreteStrain * (c - layer.depth) / c;
    const double force = layer.area * steel_stress(strain, fy, es) * 1000.0;
    st.P += force;
    st.M += force * (depth / 2.0 - layer.depth);
    if (layer.depth > deepest) {
      deepest = layer.depth;
      st.eps_t = -strain;
    }
  }
  return st;
}

SectionState pure_bending(double width, double depth, double fc, double fy, double es,
                          std::span<const SteelLayer> layers) {
  double lo = 1e-12 * depth;
  double hi = 10.0 * depth;
  SectionState s_lo = section_state(width, depth, fc, fy, es, layers, lo);
  if (s_lo.P >= 0.0) {
    s_lo.M = 0.0;
    return s_lo;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (section_state(width, depth, fc, fy, es, layers, mid).P < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * depth) break;
  }
  return section_state(width, depth, fc, fy, es, layers, 0.5 * (lo + hi));
}

CheckResult check_beam_flexure(const MemberSection& section, const ReinforcementLayout& layout, double Mu,
                               TensionFace face, const DesignSettings& settings) {
  const double demand = std::abs(Mu);
  std::vector<SteelLayer> layers;
  if (face == TensionFace::bottom) {
    if (layout.As() > 0) layers.push_back({layout.As(), layout.d});
    if (layout.As_prime() > 0) layers.push_back({layout.As_prime(), layout.d_prime});
  } else {
    if (layout.As_prime() > 0) layers.push_back({layout.As_prime(), section.h - layout.d_prime});
    if (layout.As() > 0) layers.push_back({layout.As(), section.h - layout.d});
  }
  const std::string name = face == TensionFace::bottom ? "beam_flexure_bottom" : "beam_flexure_top";
  const double tension_area = face == TensionFace::bottom ? layout.As() : layout.As_prime();
  if (tension_area <= 0.0) return CheckResult::make(name, demand, 0.0);

  const auto st = pure_bending(section.b, section.h, section.fc, layout.fy, settings.steel_modulus, layers);
  auto result = CheckResult::make(name, demand, settings.phi_flexure * std::max(st.M, 0.0));
  if (demand > 0.0 && st.eps_t < kTensionControlled)
    result.fail("over-reinforced: net tensile strain below 0.005", kTensionControlled / std::max(st.eps_t, 1e-6));
  return result;
}

double concrete_shear_capacity(double fc, double bw, double d) {
  return 170.0 * std::sqrt(fc) * bw * d;
}

CheckResult check_beam_shear(const MemberSection& section, const ReinforcementLayout& layout, double Vu,
                             const DesignSettings& settings) {
  if (layout.Av() > 0.0 && !(layout.stirrups.spacing > 0.0))
    throw DomainError("stirrup spacing must be > 0");
  const double vc = concrete_shear_capacity(section.fc, section.b, layout.d);
  const double vs =
      layout.Av() > 0.0 ? layout.Av() * layout.fy * 1000.0 * layout.d / layout.stirrups.spacing : 0.0;
  auto result = CheckResult::make("beam_shear", std::abs(Vu), settings.phi_shear * (vc + vs));
  const double s_max = layout.d / 2.0;
  if (layout.Av() > 0.0 && layout.stirrups.spacing > s_max + 1e-12)
    result.fail("stirrup spacing exceeds d/2", layout.stirrups.spacing / s_max);
  return result;
}

std::vector<SteelLayer> ColumnReinforcement::layers(double depth) const {
  std::vector<SteelLayer> out;
  if (bars_per_face < 2) return out;
  const double a = bar_area(diameter);
  const int n = bars_per_face;
  for (int i = 0; i < n; ++i) {
    const double y = edge_distance + (depth - 2.0 * edge_distance) * i / (n - 1);
    const int count = (i == 0 || i == n - 1) ? n : 2;
    out.push_back({count * a, y});
  }
  return out;
}

std::optional<double> InteractionDiagram::moment_capacity(double phiP) const {
  if (phiP > phiP0 + 1e-9 * std::abs(phiP0) || phiP < phiPt - 1e-9 * std::abs(phiPt)) return std::nullopt;
  std::optional<double> best;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& p = points[i];
    const auto& q = points[i + 1];
    const double lo = std::min(p.phiP, q.phiP);
    const double hi = std::max(p.phiP, q.phiP);
    if (phiP < lo || phiP > hi) continue;
    const double t = hi > lo ? (phiP - p.phiP) / (q.phiP - p.phiP) : 0.0;
    const double m = p.phiM + t * (q.phiM - p.phiM);
    if (!best || m > *best) best = m;
  }
  if (!best) return 0.0;
  return std::max(*best, 0.0);
}

InteractionDiagram interaction_diagram(const MemberSection& section, const ColumnReinforcement& layout,
                                       BendingAxis axis, const DesignSettings& settings) {
  const double depth = axis == BendingAxis::strong ? section.h : section.b;
  const double width = axis == BendingAxis::strong ? section.b : section.h;
  const auto layers = layout.layers(depth);
  const double fy = layout.fy;
  const double es = settings.steel_modulus;
  const double ast = layout.area();

  InteractionDiagram dia;
  const double p0 = 0.85 * section.fc * 1000.0 * width * depth + ast * fy * 1000.0;
  const double pt = -ast * fy * 1000.0;
  dia.phiP0 = settings.phi_compression * p0;
  dia.phiPt = settings.phi_flexure * pt;

  dia.points.push_back({dia.phiPt, 0.0, 0.0});
  const SectionState bend = pure_bending(width, depth, section.fc, fy, es, layers);
  bool bend_inserted = ast <= 0.0;
  // 50 points: pure tension, the sweep, the zero-axial point and pure compression.
  const int kSweep = bend_inserted ? 48 : 47;
  for (int k = 0; k < kSweep; ++k) {
    const double c = depth * 0.02 * std::pow(150.0, static_cast<double>(k) / (kSweep - 1));
    if (!bend_inserted && bend.c <= c) {
      const double phi = strength_factor(bend.eps_t, fy, es, settings);
      dia.points.push_back({phi * bend.P, phi * std::abs(bend.M), bend.c});
      bend_inserted = true;
    }
    const auto st = section_state(width, depth, section.fc, fy, es, layers, c);
    const double phi = strength_factor(st.eps_t, fy, es, settings);
    dia.points.push_back({phi * st.P, phi * std::abs(st.M), c});
  }
  if (!bend_inserted) {
    const double phi = strength_factor(bend.eps_t, fy, es, settings);
    dia.points.push_back({phi * bend.P, phi * std::abs(bend.M), bend.c});
  }
  dia.points.push_back({dia.phiP0, 0.0, std::numeric_limits<double>::infinity()});
  return dia;
}

namespace {

CheckResult check_against(const InteractionDiagram& dia, const std::string& name, double Pu, double Mu) {
  const double mu = std::abs(Mu);
  if (Pu > dia.phiP0)
    return CheckResult::make(name, Pu, dia.phiP0)
        .fail("axial load exceeds pure-compression capacity", Pu / dia.phiP0);
  if (Pu < dia.phiPt)
    return CheckResult::make(name, -Pu, -dia.phiPt)
        .fail("axial tension exceeds steel capacity", dia.phiPt < 0 ? Pu / dia.phiPt : kRatioCap);
  if (mu <= 0.0)
    return Pu >= 0.0 ? CheckResult::make(name, Pu, dia.phiP0) : CheckResult::make(name, -Pu, -dia.phiPt);
  return CheckResult::make(name, mu, dia.moment_capacity(Pu).value_or(0.0));
}

const char* axis_name(BendingAxis axis) {
  return axis == BendingAxis::strong ? "column_strong_axis" : "column_weak_axis";
}

}  // namespace

CheckResult check_column(const MemberSection& section, const ColumnReinforcement& layout, double Pu,
                         double Mu, BendingAxis axis, const DesignSettings& settings) {
  return check_against(interaction_diagram(section, layout, axis, settings), axis_name(axis), Pu, Mu);
}

std::vector<CheckResult> check_serviceability(const InternalForces& forces, const StructuralModel& model,
                                              const DesignSettings& settings) {
  std::vector<CheckResult> out;
  for (std::size_t m = 0; m < model.members.size(); ++m) {
    if (model.members[m].role != MemberRole::beam) continue;
    const auto& mf = forces.members.at(m);
    double defl = 0.0;
    for (const auto& st : mf.stations) defl = std::max(defl, st.deflection);
    out.push_back(CheckResult::make("deflection:" + std::to_string(model.members[m].id), defl,
                                    mf.length / settings.deflection_divisor));
  }
  out.push_back(CheckResult::make("top_displacement", forces.top_displacement,
                                  model.height / settings.drift_divisor));
  return out;
}

FaceConstraints beam_face(double width, const DesignSettings& settings) {
  FaceConstraints f;
  f.width = width;
  f.cover = settings.beam_cover;
  f.stirrup_diameter = settings.stirrup_diameter;
  f.min_bars = 2;
  f.max_bars = settings.max_bars_per_face;
  f.min_clear = settings.min_clear_spacing;
  f.catalog = settings.bar_catalog;
  return f;
}

std::vector<BarGroup> feasible_arrangements(const FaceConstraints& face) {
  std::vector<BarGroup> out;
  const double available = face.width - 2.0 * face.cover - 2.0 * mm(face.stirrup_diameter);
  for (int dia : face.catalog) {
    const double db = mm(dia);
    const double clear = std::max(face.min_clear, db);
    for (int n = std::max(face.min_bars, 1); n <= face.max_bars; ++n) {
      const double needed = n * db + (n - 1) * clear;
      if (needed > available + 1e-12) break;
      if (face.max_spacing && n > 1 && (available - db) / (n - 1) > *face.max_spacing + 1e-12) continue;
      if (face.max_spacing && n == 1 && available > *face.max_spacing + 1e-12) continue;
      out.push_back({dia, n});
    }
  }
  std::sort(out.begin(), out.end(), [](const BarGroup& a, const BarGroup& b) {
    if (a.area() != b.area()) return a.area() < b.area();
    if (a.count != b.count) return a.count < b.count;
    return a.diameter < b.diameter;
  });
  return out;
}

std::optional<BarGroup> select_reinforcement(double required_area, const FaceConstraints& face) {
  if (required_area < 0.0) throw DomainError("required steel area must be >= 0");
  for (const auto& g : feasible_arrangements(face))
    if (g.area() >= required_area) return g;
  return std::nullopt;
}

std::optional<double> required_flexural_steel(double Mu, double width, double d, double fc, double fy,
                                              double phi) {
  if (Mu <= 0.0) return 0.0;
  const double fc_kpa = fc * 1000.0;
  const double disc = 1.0 - 2.0 * Mu / (phi * 0.85 * fc_kpa * width * d * d);
  if (disc < 0.0) return std::nullopt;
  return 0.85 * fc * width * d / fy * (1.0 - std::sqrt(disc));
}

namespace {

double face_depth(const MemberSection& s, const DesignSettings& settings, int dia) {
  return s.h - settings.beam_cover - mm(settings.stirrup_diameter) - mm(dia) / 2.0;
}

CheckResult spacing_violation(const std::string& name, const FaceConstraints& face) {
  int smallest = *std::min_element(face.catalog.begin(), face.catalog.end());
  const double db = mm(smallest);
  const double needed = 2 * db + std::max(face.min_clear, db);
  const double available = face.width - 2.0 * face.cover - 2.0 * mm(face.stirrup_diameter);
  auto r = CheckResult::make(name, needed, std::max(available, 0.0));
  return r.fail("no bar arrangement fits the section width", needed / std::max(available, 1e-6));
}

}  // namespace

BeamDesign design_beam(const MemberSection& section, const BeamDemand& demand, const DesignSettings& settings) {
  BeamDesign out;
  auto& lay = out.layout;
  lay.fy = settings.fy;
  const auto face = beam_face(section.b, settings);
  const auto options = feasible_arrangements(face);
  const double min_face = 0.5 * settings.beam_min_ratio * section.b * section.h;
  const int smallest = *std::min_element(settings.bar_catalog.begin(), settings.bar_catalog.end());

  if (options.empty()) {
    out.checks.push_back(spacing_violation("beam_bar_spacing", face));
    lay.bottom = lay.top = {smallest, 2};
  } else {
    const double d_max = face_depth(section, settings, smallest);
    auto choose = [&](double moment, TensionFace tf) {
      const auto lower = required_flexural_steel(moment, section.b, d_max, section.fc, settings.fy,
                                                 settings.phi_flexure);
      const double floor_area = std::max(min_face, lower.value_or(0.0));
      for (const auto& g : options) {
        if (g.area() < floor_area) continue;
        ReinforcementLayout trial;
        trial.fy = settings.fy;
        const double d = face_depth(section, settings, g.diameter);
        if (tf == TensionFace::bottom) {
          trial.bottom = g;
          trial.d = d;
        } else {
          trial.top = g;
          trial.d_prime = section.h - d;
        }
        if (check_beam_flexure(section, trial, moment, tf, settings).pass) return g;
      }
      return options.back();
    };
    lay.bottom = choose(demand.sagging, TensionFace::bottom);
    lay.top = choose(demand.hogging, TensionFace::top);
  }
  lay.d = face_depth(section, settings, lay.bottom.diameter);
  lay.d_prime = section.h - face_depth(section, settings, lay.top.diameter);

  lay.stirrups.diameter = settings.stirrup_diameter;
  lay.stirrups.legs = settings.stirrup_legs;
  const double s_max = std::floor(lay.d / 2.0 / 0.05 + 1e-9) * 0.05;
  lay.stirrups.spacing = 0.05;
  for (double s = std::max(s_max, 0.05); s >= 0.05 - 1e-12; s -= 0.05) {
    lay.stirrups.spacing = s;
    if (check_beam_shear(section, lay, demand.shear, settings).pass) break;
  }

  out.checks.push_back(check_beam_flexure(section, lay, demand.sagging, TensionFace::bottom, settings));
  out.checks.push_back(check_beam_flexure(section, lay, demand.hogging, TensionFace::top, settings));
  out.checks.push_back(check_beam_shear(section, lay, demand.shear, settings));
  return out;
}

ColumnDesign design_column(const MemberSection& section, std::span<const ColumnDemand> demands,
                           const DesignSettings& settings) {
  ColumnDesign out;
  FaceConstraints face;
  face.width = std::min(section.b, section.h);
  face.cover = settings.column_cover;
  face.stirrup_diameter = settings.stirrup_diameter;
  face.min_bars = 2;
  face.max_bars = settings.max_bars_per_face;
  face.min_clear = settings.min_clear_spacing;
  face.catalog = settings.bar_catalog;

  auto options = feasible_arrangements(face);
  auto total_area = [](const BarGroup& g) { return 4.0 * (g.count - 1) * bar_area(g.diameter); };
  std::stable_sort(options.begin(), options.end(), [&](const BarGroup& a, const BarGroup& b) {
    if (total_area(a) != total_area(b)) return total_area(a) < total_area(b);
    if (a.count != b.count) return a.count < b.count;
    return a.diameter < b.diameter;
  });

  auto make_layout = [&](const BarGroup& g) {
    ColumnReinforcement c;
    c.diameter = g.diameter;
    c.bars_per_face = g.count;
    c.fy = settings.fy;
    c.edge_distance = settings.column_cover + mm(settings.stirrup_diameter) + mm(g.diameter) / 2.0;
    c.ties.diameter = settings.stirrup_diameter;
    c.ties.legs = settings.stirrup_legs;
    const double s = std::min({16.0 * mm(g.diameter), 48.0 * mm(settings.stirrup_diameter),
                               std::min(section.b, section.h)});
    c.ties.spacing = std::max(0.05, std::floor(s / 0.05 + 1e-9) * 0.05);
    return c;
  };

  auto evaluate = [&](const ColumnReinforcement& c) {
    const auto strong = interaction_diagram(section, c, BendingAxis::strong, settings);
    const auto weak = interaction_diagram(section, c, BendingAxis::weak, settings);
    CheckResult worst_s = CheckResult::make("column_strong_axis", 0.0, 1.0);
    CheckResult worst_w = CheckResult::make("column_weak_axis", 0.0, 1.0);
    for (const auto& d : demands) {
      auto rs = check_against(strong, axis_name(BendingAxis::strong), d.P, d.Mw);
      if (rs.ratio > worst_s.ratio) worst_s = rs;
      auto rw = check_against(weak, axis_name(BendingAxis::weak), d.P, d.Mv);
      if (rw.ratio > worst_w.ratio) worst_w = rw;
    }
    return std::pair{worst_s, worst_w};
  };

  if (options.empty()) {
    out.checks.push_back(spacing_violation("column_bar_spacing", face));
    const int smallest = *std::min_element(settings.bar_catalog.begin(), settings.bar_catalog.end());
    out.layout = make_layout({smallest, 2});
    auto [s, w] = evaluate(out.layout);
    out.checks.push_back(s);
    out.checks.push_back(w);
    return out;
  }

  const double min_area = settings.column_min_ratio * section.b * section.h;
  for (const auto& g : options) {
    if (total_area(g) < min_area) continue;
    auto layout = make_layout(g);
    auto [s, w] = evaluate(layout);
    if (s.pass && w.pass) {
      out.layout = layout;
      out.checks = {s, w};
      return out;
    }
  }
  out.layout = make_layout(options.back());
  auto [s, w] = evaluate(out.layout);
  out.checks = {s, w};
  if (total_area(options.back()) < min_area) {
    out.checks.push_back(CheckResult::make("column_min_steel", min_area, total_area(options.back())));
  }
  return out;
}

}  // namespace rcbbo
