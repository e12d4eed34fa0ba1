#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rcbbo/model.hpp"

namespace rcbbo {

/// E = 4700·√f'c, both in MPa. Throws DomainError for f'c <= 0.
double concrete_modulus(double fc_mpa);

/// Rectangular concrete section. b is measured along the member's local w
/// axis and h along the local v (depth) axis.
struct MemberSection {
  double b = 0.0;
  double h = 0.0;
  double fc = 25.0;

  double modulus() const { return concrete_modulus(fc); }  ///< MPa
  double area() const { return b * h; }
  double inertia_strong() const { return b * h * h * h / 12.0; }  ///< about w
  double inertia_weak() const { return h * b * b * b / 12.0; }    ///< about v
  double torsion_constant() const;
};

/// Throws DomainError unless b, h, f'c are all positive.
MemberSection make_section(double b, double h, double fc);

/// Support condition used for one solve, aligned with model.supports.
struct SupportStiffness {
  std::array<bool, 6> restrained{};
  Dof6 springs{};

  static SupportStiffness fixed();
  static SupportStiffness from(const Support& s);
};

/// Internal force resultants at one station, member local axes.
/// N is tension-positive; Mw bends in the x-v plane (sagging positive for
/// beams, whose v axis points up).
struct StationForces {
  double x = 0.0;
  double N = 0.0;
  double Vv = 0.0;
  double Vw = 0.0;
  double T = 0.0;
  double Mv = 0.0;
  double Mw = 0.0;
  double deflection = 0.0;  ///< transverse displacement relative to the chord, m
};

struct MemberForces {
  std::vector<StationForces> stations;
  double length = 0.0;
};

struct InternalForces {
  std::vector<Dof6> displacements;    ///< per node, model order
  std::vector<MemberForces> members;  ///< per member, model order
  std::vector<Dof6> reactions;        ///< per support, model order; force on the structure
  double top_displacement = 0.0;      ///< horizontal displacement magnitude at the top level
};

struct FactoredCase {
  double factor = 1.0;
  const LoadCase* load_case = nullptr;
  bool self_weight = false;  ///< add section self-weight scaled by factor
};

/// Expands a combination into factored cases, including self-weight when the
/// combination references the model's self-weight case.
std::vector<FactoredCase> expand_combination(const StructuralModel& model, const Combination& c);

inline constexpr int kStations = 5;

/// Linear elastic 3D frame analysis by the direct stiffness method with
/// 12-DOF Euler-Bernoulli elements. Factorizes once at construction; every
/// solve reuses the factorization.
class FrameAnalysis {
 public:
  FrameAnalysis(const StructuralModel& model, std::vector<MemberSection> sections,
                std::vector<SupportStiffness> supports);

  InternalForces solve(std::span<const FactoredCase> cases) const;
  InternalForces solve(const LoadCase& load_case) const;
  InternalForces solve(const Combination& combination) const;

  std::size_t dof_count() const { return 6 * model_->nodes.size(); }

  /// Sum of applied forces (x, y, z) for the given cases, self-weight included.
  Vec3 applied_force_total(std::span<const FactoredCase> cases) const;

 private:
  struct Element {
    std::size_t a = 0, b = 0;  // node indices
    double length = 0.0;
    Eigen::Matrix3d rotation;  // rows: local x, v, w in global coordinates
    Eigen::Matrix<double, 12, 12> k_local;
  };

  Eigen::Matrix<double, 12, 1> fixed_end_reactions(const Element& e, const Eigen::Vector3d& q_local) const;
  std::vector<Eigen::Vector3d> member_loads(std::span<const FactoredCase> cases) const;

  const StructuralModel* model_;
  std::vector<MemberSection> sections_;
  std::vector<SupportStiffness> supports_;
  std::vector<Element> elements_;
  Eigen::MatrixXd k_full_;          // without springs or restraints
  std::vector<int> free_index_;     // global dof -> free dof index or -1
  std::vector<double> spring_diag_; // per global dof
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

/// Convenience single solve.
InternalForces solve_static(const StructuralModel& model, const std::vector<MemberSection>& sections,
                            const std::vector<SupportStiffness>& supports, const LoadCase& load_case);

}  // namespace rcbbo
