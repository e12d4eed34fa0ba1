#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcbbo/frame_solver.hpp"
#include "rcbbo/settings.hpp"

namespace rcbbo {

/// Outcome of one limit-state check. pass ⇔ ratio ≤ 1 + 1e-9.
/// Advisory checks are reported but never penalized.
struct CheckResult {
  std::string name;
  double demand = 0.0;
  double capacity = 0.0;
  double ratio = 0.0;
  bool pass = true;
  std::string reason;
  bool advisory = false;

  /// ratio = demand / capacity; zero demand always passes, zero capacity with
  /// positive demand saturates at kRatioCap.
  static CheckResult make(std::string name, double demand, double capacity);
  /// Forces a failure with the given reason; ratio is raised to at least `ratio_floor`.
  CheckResult& fail(std::string why, double ratio_floor);
};

inline constexpr double kRatioCap = 1e3;

/// Bar area in m² for a diameter in mm.
double bar_area(int diameter_mm);

struct BarGroup {
  int diameter = 0;  ///< mm
  int count = 0;

  double area() const { return count * bar_area(diameter); }
  bool operator==(const BarGroup&) const = default;
};

struct Stirrups {
  int diameter = 10;  ///< mm
  double spacing = 0.0;  ///< m
  int legs = 2;

  double area() const { return legs * bar_area(diameter); }  ///< Av
};

/// Longitudinal and shear reinforcement of a rectangular beam section.
struct ReinforcementLayout {
  BarGroup bottom;
  BarGroup top;
  double fy = 420.0;     ///< MPa
  double d = 0.0;        ///< effective depth of the bottom bars, m
  double d_prime = 0.0;  ///< depth of the top bars from the top fibre, m
  Stirrups stirrups;

  double As() const { return bottom.area(); }
  double As_prime() const { return top.area(); }
  double Av() const { return stirrups.area(); }
};

enum class TensionFace { bottom, top };

/// Steel layer for strain-compatibility analysis; depth from the compression fibre.
struct SteelLayer {
  double area = 0.0;
  double depth = 0.0;
};

struct SectionState {
  double c = 0.0;        ///< neutral-axis depth, m
  double P = 0.0;        ///< axial force, compression positive, kN
  double M = 0.0;        ///< moment about mid-depth, kN·m
  double eps_t = 0.0;    ///< strain in the extreme tension layer (tension positive)
};

/// Whitney block factor β1 for f'c in MPa.
double stress_block_factor(double fc);

/// Equivalent rectangular stress block plus elastic-perfectly plastic steel
/// at neutral-axis depth c (ε_cu = 0.003).
SectionState section_state(double width, double depth, double fc, double fy, double es,
                           std::span<const SteelLayer> layers, double c);

/// Nominal moment at zero axial force (neutral axis found by bisection).
SectionState pure_bending(double width, double depth, double fc, double fy, double es,
                          std::span<const SteelLayer> layers);

CheckResult check_beam_flexure(const MemberSection& section, const ReinforcementLayout& layout, double Mu,
                               TensionFace face = TensionFace::bottom,
                               const DesignSettings& settings = {});

/// Vc = 170·√f'c·bw·d in kN (f'c in MPa, bw and d in m), Vs = Av·fy·d/s.
double concrete_shear_capacity(double fc, double bw, double d);

CheckResult check_beam_shear(const MemberSection& section, const ReinforcementLayout& layout, double Vu,
                             const DesignSettings& settings = {});

/// Symmetric column cage: bars_per_face bars on each of the four faces,
/// corners shared, 4·(n-1) bars in total.
struct ColumnReinforcement {
  int diameter = 0;
  int bars_per_face = 0;
  double fy = 420.0;
  double edge_distance = 0.0;  ///< bar centroid from the face, m
  Stirrups ties;

  int bar_count() const { return bars_per_face >= 2 ? 4 * (bars_per_face - 1) : 0; }
  double area() const { return bar_count() * bar_area(diameter); }
  /// Layers for bending with the given section depth in the bending plane.
  std::vector<SteelLayer> layers(double depth) const;
};

enum class BendingAxis { strong, weak };

struct InteractionPoint {
  double phiP = 0.0;
  double phiM = 0.0;
  double c = 0.0;
};

/// Design P-M curve (50 points, pure tension to pure compression).
struct InteractionDiagram {
  std::vector<InteractionPoint> points;  ///< ordered by increasing neutral-axis depth
  double phiP0 = 0.0;                    ///< φ(0.85·f'c·Ag + Ast·fy)
  double phiPt = 0.0;                    ///< φ(−Ast·fy)

  /// Largest φMn available at the given φPn level; nullopt outside [phiPt, phiP0].
  std::optional<double> moment_capacity(double phiP) const;
};

InteractionDiagram interaction_diagram(const MemberSection& section, const ColumnReinforcement& layout,
                                       BendingAxis axis, const DesignSettings& settings = {});

/// Pu compression positive, Mu magnitude about the chosen axis.
CheckResult check_column(const MemberSection& section, const ColumnReinforcement& layout, double Pu,
                         double Mu, BendingAxis axis = BendingAxis::strong,
                         const DesignSettings& settings = {});

/// Beam deflection ≤ L/180 for each beam; top displacement ≤ H/450.
std::vector<CheckResult> check_serviceability(const InternalForces& forces, const StructuralModel& model,
                                              const DesignSettings& settings = {});

/// Layout constraints for one face of bars.
struct FaceConstraints {
  double width = 0.0;         ///< section width across which the bars are laid, m
  double cover = 0.04;        ///< clear cover to the stirrup, m
  int stirrup_diameter = 10;  ///< mm (0 for footing mats)
  int min_bars = 2;
  int max_bars = 12;
  double min_clear = 0.025;
  std::optional<double> max_spacing;  ///< centre-to-centre limit, m
  std::vector<int> catalog{10, 13, 16, 19, 22, 25};
};

FaceConstraints beam_face(double width, const DesignSettings& settings);

/// Every arrangement that satisfies the spacing and count rules, ordered by
/// area, then fewer bars, then smaller diameter.
std::vector<BarGroup> feasible_arrangements(const FaceConstraints& face);

/// Smallest-area feasible arrangement with area ≥ required (m²). nullopt when
/// none fits: a constructive-constraint violation for the caller to penalize.
std::optional<BarGroup> select_reinforcement(double required_area, const FaceConstraints& face);

/// Singly-reinforced steel area for φMn = Mu; nullopt when the section is too
/// small for any tension-steel amount.
std::optional<double> required_flexural_steel(double Mu, double width, double d, double fc, double fy,
                                              double phi);

struct BeamDemand {
  double sagging = 0.0;  ///< max positive Mw, kN·m
  double hogging = 0.0;  ///< max |negative Mw|, kN·m
  double shear = 0.0;    ///< max |Vv|, kN
};

struct BeamDesign {
  ReinforcementLayout layout;
  std::vector<CheckResult> checks;
};

BeamDesign design_beam(const MemberSection& section, const BeamDemand& demand, const DesignSettings& settings);

struct ColumnDemand {
  double P = 0.0;   ///< compression positive
  double Mw = 0.0;  ///< strong-axis moment
  double Mv = 0.0;  ///< weak-axis moment
};

struct ColumnDesign {
  ColumnReinforcement layout;
  std::vector<CheckResult> checks;
};

ColumnDesign design_column(const MemberSection& section, std::span<const ColumnDemand> demands,
                           const DesignSettings& settings);

}  // namespace rcbbo
