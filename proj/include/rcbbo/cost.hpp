#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rcbbo/foundation.hpp"
#include "rcbbo/rc_design.hpp"
#include "rcbbo/settings.hpp"

namespace rcbbo {

/// Unit costs of one element family. Steel prices are per kg, concrete per m³,
/// formwork per m².
struct ElementUnitCosts {
  double formwork = 0.0;
  double stirrup_elaboration = 0.0;
  double stirrup_placement = 0.0;
  double bar_elaboration = 0.0;
  double bar_placement = 0.0;
  std::map<double, double> concrete_elaboration;  ///< by grade f'c
  double concrete_placement = 0.0;

  /// Throws ConfigError when the grade has no price.
  double concrete_price(double fc, const std::string& family) const;
};

struct UnitCosts {
  ElementUnitCosts beams;
  ElementUnitCosts columns;
  ElementUnitCosts foundations;
  double excavation = 0.0;  ///< per m³
  double refill = 0.0;      ///< per m³
};

enum class ElementFamily { beam, column, foundation };

/// Measured work of one element.
struct ElementQuantities {
  ElementFamily family = ElementFamily::beam;
  int id = 0;
  double fc = 25.0;
  double concrete = 0.0;      ///< m³
  double formwork = 0.0;      ///< m²
  double bar_mass = 0.0;      ///< kg
  double stirrup_mass = 0.0;  ///< kg
  double excavation = 0.0;    ///< m³
  double refill = 0.0;        ///< m³
};

struct QuantityTakeoff {
  std::vector<ElementQuantities> items;
};

/// Steel mass of straight bars in kg.
double steel_mass(double length, double area, const DesignSettings& s);

/// Bottom bars over the full length; top bars over top_bar_fraction·L at each
/// support; closed two-leg stirrups at the design spacing.
ElementQuantities beam_quantities(int id, double length, const MemberSection& section,
                                  const ReinforcementLayout& layout, const DesignSettings& s);

/// Bars run the full height plus a lap of lap_factor diameters.
ElementQuantities column_quantities(int id, double length, const MemberSection& section,
                                    const ColumnReinforcement& layout, const DesignSettings& s);

/// Slab and column stub concrete, side formwork, both bottom mats, excavation
/// prism and the refill that remains after the concrete is placed.
ElementQuantities footing_quantities(int id, const Footing& footing, const DesignSettings& s);

struct CostTerm {
  std::string name;  ///< e.g. "beams.formwork"
  double value = 0.0;
};

struct CostBreakdown {
  std::vector<CostTerm> terms;
  double total = 0.0;
  double beams = 0.0;
  double columns = 0.0;
  double foundations = 0.0;
  // Categories: formwork, steel, concrete, earthwork
  double formwork = 0.0;
  double steel = 0.0;
  double concrete = 0.0;
  double earthwork = 0.0;
};

CostBreakdown direct_cost(const QuantityTakeoff& takeoff, const UnitCosts& costs);

/// F' = F·(1 + P·Σ max(0, ratio − 1)) over non-advisory checks.
double penalize(double cost, std::span<const CheckResult> checks, const DesignSettings& s);

/// Σ max(0, ratio − 1) over non-advisory checks.
double total_violation(std::span<const CheckResult> checks);

}  // namespace rcbbo
