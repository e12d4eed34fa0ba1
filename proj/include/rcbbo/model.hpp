#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rcbbo {

// Units throughout: m, kN, kPa; concrete grade f'c in MPa.

using Vec3 = std::array<double, 3>;
using Dof6 = std::array<double, 6>;

struct Node {
  int id = 0;
  Vec3 xyz{};
};

enum class MemberRole { beam, column };

struct Member {
  int id = 0;
  int start = 0;  ///< node id
  int end = 0;    ///< node id
  MemberRole role = MemberRole::beam;
  std::string group;
  /// Direction of the section depth h. Defaults: global Z projected out of the
  /// member axis for non-vertical members, global X for vertical members.
  std::optional<Vec3> depth_direction;
};

enum class SupportKind { fixed, pinned, spring };

struct Support {
  int node = 0;
  SupportKind kind = SupportKind::fixed;
  /// Per-DOF restraint mask (ux, uy, uz, rx, ry, rz).
  std::array<bool, 6> restrained{};
  /// Per-DOF elastic springs, kN/m and kN·m/rad. Ignored on restrained DOFs.
  Dof6 springs{};
  /// Footing group designed under this support; empty when none.
  std::string footing_group;
};

/// Uniform load along a member, in global axes, kN/m.
struct MemberLoad {
  int member = 0;
  Vec3 w{};
};

/// Nodal force/moment in global axes (kN, kN·m).
struct NodalLoad {
  int node = 0;
  Dof6 f{};
};

struct LoadCase {
  std::string name;
  std::vector<MemberLoad> member_loads;
  std::vector<NodalLoad> nodal_loads;
};

enum class CombinationKind { strength, service, wind };

struct Combination {
  std::string name;
  CombinationKind kind = CombinationKind::strength;
  std::map<std::string, double> factors;  ///< load case name -> factor
};

struct StructuralModel {
  std::vector<Node> nodes;
  std::vector<Member> members;
  std::vector<Support> supports;
  std::vector<LoadCase> load_cases;
  std::vector<Combination> combinations;
  double height = 0.0;  ///< total building height H, m
  std::string self_weight_case = "dead";
  double concrete_unit_weight = 24.0;  ///< kN/m³

  std::optional<std::size_t> node_index(int id) const;
  std::optional<std::size_t> member_index(int id) const;
  const LoadCase* load_case(const std::string& name) const;
};

/// Lists every violated structural-model invariant. Empty iff well formed.
std::vector<std::string> validate_model(const StructuralModel& model);

// ---------------------------------------------------------------------------
// Discrete design space

/// `real` is unrestricted (benchmark functions); the others must be positive.
enum class VariableKind { dimension, rectangularity, grade, real };

struct DesignVariable {
  std::string name;
  VariableKind kind = VariableKind::dimension;
  std::vector<double> values;
};

/// Either a design variable name or a fixed value.
struct ValueRef {
  std::string variable;  ///< empty when fixed
  double fixed = 0.0;

  bool is_variable() const { return !variable.empty(); }
};

/// Cross-section binding for a beam or column group. Two groups that name the
/// same variable share it (aliasing is explicit, never inferred).
struct SectionGroup {
  std::string name;
  ValueRef width;
  ValueRef height;
  ValueRef grade;
};

struct FootingGroup {
  std::string name;
  ValueRef rectangularity;
  ValueRef grade;
  double depth = 1.5;  ///< foundation base depth below ground, m
};

struct DesignVariableSpec {
  std::vector<DesignVariable> variables;
  std::vector<SectionGroup> section_groups;
  std::vector<FootingGroup> footing_groups;

  std::size_t size() const { return variables.size(); }
  std::optional<std::size_t> variable_index(const std::string& name) const;
  const SectionGroup* section_group(const std::string& name) const;
  const FootingGroup* footing_group(const std::string& name) const;
};

/// Throws SpecError listing the first violated invariant.
void validate_spec(const DesignVariableSpec& spec);

/// Cross-checks group references between a model and a spec.
std::vector<std::string> validate_bindings(const StructuralModel& model,
                                           const DesignVariableSpec& spec);

struct DesignCandidate {
  std::vector<std::size_t> indices;  ///< index into each candidate list
  std::vector<double> values;        ///< chosen value per variable, spec order
  std::vector<double> genome;        ///< provenance, each component in [0,1]

  double resolve(const ValueRef& ref, const DesignVariableSpec& spec) const;
  /// One CSV row, one column per variable (shortest round-trip formatting).
  std::string csv_row() const;
  bool operator==(const DesignCandidate& other) const { return indices == other.indices; }
};

/// Uniform binning: component g is clamped to [0,1] and mapped to index
/// min(floor(g·m), m-1) of the m-entry list.
DesignCandidate decode_candidate(std::span<const double> genome, const DesignVariableSpec& spec);

/// Genome at the bin centers of the given indices.
std::vector<double> encode_center(std::span<const std::size_t> indices,
                                  const DesignVariableSpec& spec);

DesignCandidate candidate_from_indices(std::vector<std::size_t> indices,
                                       const DesignVariableSpec& spec);

/// Product of candidate-list lengths.
std::uint64_t candidate_count(const DesignVariableSpec& spec);

/// Lexicographic enumeration, first variable most significant.
class CandidateRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = DesignCandidate;
    using difference_type = std::ptrdiff_t;
    using pointer = const DesignCandidate*;
    using reference = const DesignCandidate&;

    iterator() = default;
    iterator(const DesignVariableSpec* spec, bool at_end);

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator& other) const { return done_ == other.done_ && (done_ || current_.indices == other.current_.indices); }

   private:
    const DesignVariableSpec* spec_ = nullptr;
    DesignCandidate current_;
    bool done_ = true;
  };

  explicit CandidateRange(const DesignVariableSpec& spec) : spec_(&spec) {}
  iterator begin() const { return iterator(spec_, false); }
  iterator end() const { return iterator(spec_, true); }
  std::uint64_t size() const { return candidate_count(*spec_); }

 private:
  const DesignVariableSpec* spec_;
};

inline CandidateRange enumerate_candidates(const DesignVariableSpec& spec) { return CandidateRange(spec); }

// ---------------------------------------------------------------------------
// Soil

struct SoilStrength {
  double unit_weight = 18.0;  ///< γ, kN/m³
  double cohesion = 0.0;      ///< c, kPa
  double friction_deg = 30.0;  ///< φ, degrees
};

struct SoilLayer {
  double thickness = 1.0;
  SoilStrength first_ls;   ///< 95 % design-probability values (bearing design)
  SoilStrength second_ls;  ///< 85 % design-probability values (settlement design)
};

/// Hyperbolic p-S law parameters for one footing context.
struct SettlementParameters {
  double linearity_limit = 200.0;       ///< R*, kPa
  double reference_settlement = 0.02;   ///< S̄ at p = R*, m
};

struct SoilProfile {
  std::vector<SoilLayer> layers;
  SettlementParameters settlement;
  std::map<int, SettlementParameters> overrides;  ///< by support node id
  std::optional<double> water_table_depth;
  double settlement_limit = 0.08;  ///< s_lim, m

  const SettlementParameters& settlement_at(int node) const;
  /// Layer containing the given depth below ground (last layer below the profile).
  const SoilLayer& layer_at(double depth) const;
  /// Overburden pressure γ·z integrated over the layers, 2nd-LS unit weights.
  double overburden(double depth, bool first_ls) const;
};

std::vector<std::string> validate_soil(const SoilProfile& soil);

}  // namespace rcbbo
