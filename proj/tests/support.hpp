#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rcbbo/frame_solver.hpp"
#include "rcbbo/model.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(RCBBO_DATA_DIR) / name;
}

inline rcbbo::SupportStiffness restraint(std::array<bool, 6> mask) {
  rcbbo::SupportStiffness s;
  s.restrained = mask;
  return s;
}

/// Two-node beam along x, length L, one member in group "B".
inline rcbbo::StructuralModel single_beam(double L) {
  rcbbo::StructuralModel m;
  m.height = 3.0;
  m.nodes = {{1, {0, 0, 0}}, {2, {L, 0, 0}}};
  m.members = {{1, 1, 2, rcbbo::MemberRole::beam, "B", std::nullopt}};
  rcbbo::Support a, b;
  a.node = 1;
  b.node = 2;
  m.supports = {a, b};
  return m;
}

/// Symmetric one-bay portal: columns 1→3, 2→4 (group C), beam 3→4 (group B).
inline rcbbo::StructuralModel portal(double span, double height, double w_dead) {
  rcbbo::StructuralModel m;
  m.height = height;
  m.nodes = {{1, {0, 0, 0}}, {2, {span, 0, 0}}, {3, {0, 0, height}}, {4, {span, 0, height}}};
  m.members = {{1, 1, 3, rcbbo::MemberRole::column, "C", std::nullopt},
               {2, 2, 4, rcbbo::MemberRole::column, "C", std::nullopt},
               {3, 3, 4, rcbbo::MemberRole::beam, "B", std::nullopt}};
  rcbbo::Support a, b;
  a.node = 1;
  a.footing_group = "F";
  b.node = 2;
  b.footing_group = "F";
  m.supports = {a, b};
  rcbbo::LoadCase dead{"dead", {{3, {0, 0, -w_dead}}}, {}};
  m.load_cases = {dead};
  m.combinations = {{"1.4D", rcbbo::CombinationKind::strength, {{"dead", 1.4}}},
                    {"D", rcbbo::CombinationKind::service, {{"dead", 1.0}}}};
  return m;
}

inline std::vector<rcbbo::MemberSection> uniform_sections(const rcbbo::StructuralModel& m, double b, double h) {
  return std::vector<rcbbo::MemberSection>(m.members.size(), rcbbo::make_section(b, h, 25.0));
}

}  // namespace testing
