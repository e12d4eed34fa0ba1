#pragma once

#include <string>
#include <vector>

namespace rcbbo {

/// Design-code constants that the cost model and checks depend on. All are
/// configurable from the "settings" block of the input document.
struct DesignSettings {
  // Reinforcement
  double fy = 420.0;                    ///< MPa
  double steel_modulus = 200000.0;      ///< MPa
  std::vector<int> bar_catalog{10, 13, 16, 19, 22, 25};  ///< mm
  int stirrup_diameter = 10;            ///< mm
  int stirrup_legs = 2;
  double beam_cover = 0.04;             ///< clear cover to stirrups, m
  double column_cover = 0.04;
  double min_clear_spacing = 0.025;     ///< m, together with one bar diameter
  double beam_min_ratio = 0.003;        ///< of b·h, summed over both faces
  double column_min_ratio = 0.01;       ///< of b·h, total
  int max_bars_per_face = 12;

  // Strength reduction factors
  double phi_flexure = 0.90;
  double phi_shear = 0.75;
  double phi_compression = 0.65;

  // Serviceability
  double deflection_divisor = 180.0;    ///< Δ ≤ L/180
  double drift_divisor = 450.0;         ///< D_top ≤ H/450

  // Footings
  double footing_cover = 0.075;
  int footing_bar_guess = 16;           ///< mm, used for the effective depth
  double footing_max_bar_spacing = 0.30;
  double footing_min_ratio = 0.0018;
  double footing_min_width = 0.60;
  double footing_max_width = 5.00;      ///< sizing cap, m
  double footing_min_thickness = 0.30;
  double footing_max_thickness = 1.50;
  double size_step = 0.05;
  double excavation_clearance = 0.30;   ///< working clearance each side, m
  double overturning_ls1 = 1.5;
  double overturning_ls2 = 3.0;
  double sliding_cohesion_factor = 0.75;

  // Static soil-structure interaction
  double sssi_tolerance = 0.05;
  int sssi_max_iterations = 20;
  int sssi_damping_after = 10;
  std::string sssi_combination;         ///< empty: first service combination

  // Objective
  double penalty_factor = 10.0;
  double infeasible_cost = 1e9;
  double steel_density = 7850.0;        ///< kg/m³
  double lap_factor = 40.0;             ///< column lap length in bar diameters
  double top_bar_fraction = 0.3;        ///< top bars cover 0.3·L at each support
};

}  // namespace rcbbo
