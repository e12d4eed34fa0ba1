#include "rcbbo/cost.hpp"

#include <cmath>

#include "rcbbo/csv.hpp"
#include "rcbbo/errors.hpp"

namespace rcbbo {

double ElementUnitCosts::concrete_price(double fc, const std::string& family) const {
  for (const auto& [grade, price] : concrete_elaboration)
    if (std::abs(grade - fc) < 1e-9) return price;
  throw ConfigError("unit costs: " + family + ".concrete_elaboration has no entry for grade " + format_number(fc));
}

double steel_mass(double length, double area, const DesignSettings& s) {
  return length * area * s.steel_density;
}

namespace {

double stirrup_mass(double length, double b, double h, double cover, const Stirrups& st, const DesignSettings& s) {
  if (!(st.spacing > 0.0)) return 0.0;
  const int count = static_cast<int>(std::floor(length / st.spacing + 1e-9)) + 1;
  const double perimeter = 2.0 * std::max(b - 2.0 * cover, 0.0) + 2.0 * std::max(h - 2.0 * cover, 0.0);
  return count * steel_mass(perimeter, bar_area(st.diameter), s) * st.legs / 2.0;
}

}  // namespace

ElementQuantities beam_quantities(int id, double length, const MemberSection& section,
                                  const ReinforcementLayout& layout, const DesignSettings& s) {
  ElementQuantities q;
  q.family = ElementFamily::beam;
  q.id = id;
  q.fc = section.fc;
  q.concrete = section.b * section.h * length;
  q.formwork = (2.0 * section.h + section.b) * length;
  q.bar_mass = steel_mass(length, layout.As(), s) +
               steel_mass(2.0 * s.top_bar_fraction * length, layout.As_prime(), s);
  q.stirrup_mass = stirrup_mass(length, section.b, section.h, s.beam_cover, layout.stirrups, s);
  return q;
}

ElementQuantities column_quantities(int id, double length, const MemberSection& section,
                                    const ColumnReinforcement& layout, const DesignSettings& s) {
  ElementQuantities q;
  q.family = ElementFamily::column;
  q.id = id;
  q.fc = section.fc;
  q.concrete = section.b * section.h * length;
  q.formwork = 2.0 * (section.b + section.h) * length;
  const double lap = s.lap_factor * layout.diameter / 1000.0;
  q.bar_mass = steel_mass(length + lap, layout.area(), s);
  q.stirrup_mass = stirrup_mass(length, section.b, section.h, s.column_cover, layout.ties, s);
  return q;
}

ElementQuantities footing_quantities(int id, const Footing& f, const DesignSettings& s) {
  ElementQuantities q;
  q.family = ElementFamily::foundation;
  q.id = id;
  q.fc = f.fc;
  q.concrete = f.slab_volume() + f.stub_volume();
  q.formwork = 2.0 * (f.L + f.B) * f.t + 2.0 * (f.column_x + f.column_y) * std::max(f.D - f.t, 0.0);
  const double inset = 2.0 * s.footing_cover;
  q.bar_mass = steel_mass(std::max(f.L - inset, 0.0), f.bars_L.area(), s) +
               steel_mass(std::max(f.B - inset, 0.0), f.bars_B.area(), s);
  q.excavation = f.excavation_volume(s.excavation_clearance);
  q.refill = std::max(q.excavation - q.concrete, 0.0);
  return q;
}

CostBreakdown direct_cost(const QuantityTakeoff& takeoff, const UnitCosts& costs) {
  struct Sums {
    double formwork = 0, stirrup_el = 0, stirrup_pl = 0, bar_el = 0, bar_pl = 0, concrete_el = 0, concrete_pl = 0,
           excavation = 0, refill = 0;
  };
  Sums sums[3];
  const ElementUnitCosts* prices[3] = {&costs.beams, &costs.columns, &costs.foundations};
  const char* names[3] = {"beams", "columns", "foundations"};

  for (const auto& q : takeoff.items) {
    const int f = static_cast<int>(q.family);
    const auto& p = *prices[f];
    auto& s = sums[f];
    s.formwork += q.formwork * p.formwork;
    s.stirrup_el += q.stirrup_mass * p.stirrup_elaboration;
    s.stirrup_pl += q.stirrup_mass * p.stirrup_placement;
    s.bar_el += q.bar_mass * p.bar_elaboration;
    s.bar_pl += q.bar_mass * p.bar_placement;
    s.concrete_el += q.concrete * p.concrete_price(q.fc, names[f]);
    s.concrete_pl += q.concrete * p.concrete_placement;
    s.excavation += q.excavation * costs.excavation;
    s.refill += q.refill * costs.refill;
  }

  CostBreakdown out;
  double* family_total[3] = {&out.beams, &out.columns, &out.foundations};
  for (int f = 0; f < 3; ++f) {
    const auto& s = sums[f];
    const std::string n = names[f];
    auto add = [&](const char* term, double value, double& category) {
      out.terms.push_back({n + "." + term, value});
      *family_total[f] += value;
      category += value;
    };
    if (f == 2) add("excavation", s.excavation, out.earthwork);
    add("formwork", s.formwork, out.formwork);
    add("stirrup_elaboration", s.stirrup_el, out.steel);
    add("stirrup_placement", s.stirrup_pl, out.steel);
    add("bar_elaboration", s.bar_el, out.steel);
    add("bar_placement", s.bar_pl, out.steel);
    add("concrete_elaboration", s.concrete_el, out.concrete);
    add("concrete_placement", s.concrete_pl, out.concrete);
    if (f == 2) add("refill", s.refill, out.earthwork);
  }
  out.total = out.beams + out.columns + out.foundations;
  return out;
}

double total_violation(std::span<const CheckResult> checks) {
  double v = 0.0;
  for (const auto& c : checks)
    if (!c.advisory) v += std::max(0.0, c.ratio - 1.0);
  return v;
}

double penalize(double cost, std::span<const CheckResult> checks, const DesignSettings& s) {
  return cost * (1.0 + s.penalty_factor * total_violation(checks));
}

}  // namespace rcbbo
