#include <doctest.h>

#include <cmath>

#include "rcbbo/errors.hpp"
#include "rcbbo/frame_solver.hpp"
#include "rcbbo/io.hpp"
#include "support.hpp"

using namespace rcbbo;
using testing::restraint;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<FactoredCase> single(const LoadCase& lc, double factor = 1.0) { return {{factor, &lc, false}}; }

void check_equilibrium(const StructuralModel& m, const std::vector<MemberSection>& sections,
                       const std::vector<SupportStiffness>& supports) {
  FrameAnalysis fa(m, sections, supports);
  for (const auto& c : m.combinations) {
    const auto cases = expand_combination(m, c);
    const auto r = fa.solve(cases);
    const auto applied = fa.applied_force_total(cases);
    double scale = 0.0;
    for (double f : applied) scale += std::abs(f);
    for (int d = 0; d < 3; ++d) {
      double sum = applied[d];
      for (const auto& reaction : r.reactions) sum += reaction[d];
      CHECK(std::abs(sum) <= 1e-8 * scale);
    }
  }
}

}  // namespace

TEST_CASE("concrete modulus") {
  CHECK(concrete_modulus(25.0) == doctest::Approx(23500.0).epsilon(1e-12));
  CHECK(std::abs(concrete_modulus(35.0) - 27805.57) < 0.01);
  CHECK_THROWS_AS(concrete_modulus(0.0), DomainError);
  CHECK_THROWS_AS(make_section(0.3, -0.5, 25.0), DomainError);
}

TEST_CASE("simply supported beam midspan moment is qL^2/8") {
  auto m = testing::single_beam(6.0);
  const LoadCase q{"q", {{1, {0, 0, -10.0}}}, {}};
  const std::vector<SupportStiffness> supports{restraint({true, true, true, true, false, false}),
                                               restraint({false, true, true, false, false, false})};
  const auto r = solve_static(m, testing::uniform_sections(m, 0.3, 0.5), supports, q);
  const auto& st = r.members[0].stations;
  REQUIRE(st.size() == static_cast<std::size_t>(kStations));
  CHECK(st[2].x == doctest::Approx(3.0));
  CHECK(rel(st[2].Mw, 45.0) < 1e-6);
  CHECK(std::abs(st[0].Mw) < 1e-9);
  CHECK(rel(std::abs(st[0].Vv), 30.0) < 1e-6);
  // quarter point: qx(L-x)/2
  CHECK(rel(st[1].Mw, 10 * 1.5 * 4.5 / 2) < 1e-6);
  // midspan deflection 5qL^4/384EI
  const auto s = make_section(0.3, 0.5, 25.0);
  const double EI = s.modulus() * 1000.0 * s.inertia_strong();
  CHECK(rel(std::abs(st[2].deflection), 5 * 10 * std::pow(6.0, 4) / (384 * EI)) < 1e-6);
}

TEST_CASE("cantilever tip deflection is PL^3/3EI") {
  auto m = testing::single_beam(2.0);
  const LoadCase p{"p", {}, {{2, {0, 0, -10.0, 0, 0, 0}}}};
  const std::vector<SupportStiffness> supports{SupportStiffness::fixed(), SupportStiffness{}};
  const auto sections = testing::uniform_sections(m, 0.3, 0.5);
  const auto r = solve_static(m, sections, supports, p);
  const double EI = sections[0].modulus() * 1000.0 * sections[0].inertia_strong();
  CHECK(rel(-r.displacements[1][2], 10.0 * 8.0 / (3.0 * EI)) < 1e-6);
  // fixed-end moment PL, hogging
  CHECK(rel(r.members[0].stations[0].Mw, -20.0) < 1e-6);
}

TEST_CASE("spring settlement is P/k") {
  auto m = testing::single_beam(3.0);
  SupportStiffness spring = restraint({true, true, false, true, true, true});
  spring.springs[2] = 10000.0;
  const LoadCase p{"p", {}, {{1, {0, 0, -100.0, 0, 0, 0}}, {2, {0, 0, -100.0, 0, 0, 0}}}};
  const auto r = solve_static(m, testing::uniform_sections(m, 0.3, 0.5), {spring, spring}, p);
  CHECK(rel(-r.displacements[0][2], 0.01) < 1e-6);
  CHECK(rel(-r.displacements[1][2], 0.01) < 1e-6);
  CHECK(rel(r.reactions[0][2], 100.0) < 1e-6);
}

TEST_CASE("self weight follows the section") {
  auto m = testing::single_beam(5.0);
  const LoadCase dead{"dead", {}, {}};
  m.load_cases = {dead};
  const auto r = solve_static(m, testing::uniform_sections(m, 0.3, 0.6), {SupportStiffness::fixed(), SupportStiffness::fixed()},
                              m.load_cases[0]);
  CHECK(rel(r.reactions[0][2] + r.reactions[1][2], 24.0 * 0.3 * 0.6 * 5.0) < 1e-9);
}

TEST_CASE("equilibrium on the bundled models") {
  for (const char* name : {"cs1_frame.json", "portal_sssi.json"}) {
    CAPTURE(name);
    const auto m = load_model(testing::data_path(name));
    std::vector<SupportStiffness> fixed;
    for (const auto& s : m.supports) fixed.push_back(SupportStiffness::from(s));
    check_equilibrium(m, testing::uniform_sections(m, 0.3, 0.5), fixed);

    std::vector<SupportStiffness> springs;
    for (std::size_t i = 0; i < m.supports.size(); ++i) {
      SupportStiffness s = restraint({true, true, false, false, false, true});
      s.springs = {0, 0, 2e5, 5e4, 5e4, 0};
      springs.push_back(s);
    }
    check_equilibrium(m, testing::uniform_sections(m, 0.3, 0.5), springs);
  }
}

TEST_CASE("superposition") {
  const auto m = load_model(testing::data_path("cs1_frame.json"));
  std::vector<SupportStiffness> fixed(m.supports.size(), SupportStiffness::fixed());
  FrameAnalysis fa(m, testing::uniform_sections(m, 0.3, 0.5), fixed);
  const auto* dead = m.load_case("dead");
  const auto* wind = m.load_case("wind");
  const std::vector<FactoredCase> both{{1.3, dead, true}, {0.7, wind, false}};
  const auto ab = fa.solve(both);
  const auto a = fa.solve(std::vector<FactoredCase>{{1.3, dead, true}});
  const auto b = fa.solve(std::vector<FactoredCase>{{0.7, wind, false}});
  for (std::size_t e = 0; e < ab.members.size(); ++e)
    for (std::size_t k = 0; k < ab.members[e].stations.size(); ++k) {
      const auto& s = ab.members[e].stations[k];
      const double sum = a.members[e].stations[k].Mw + b.members[e].stations[k].Mw;
      CHECK(std::abs(s.Mw - sum) <= 1e-10 * std::max(1.0, std::abs(sum)));
      const double n = a.members[e].stations[k].N + b.members[e].stations[k].N;
      CHECK(std::abs(s.N - n) <= 1e-10 * std::max(1.0, std::abs(n)));
    }
}

TEST_CASE("stiff springs approach the fixed-support solution") {
  const auto m = load_model(testing::data_path("portal_sssi.json"));
  const auto sections = testing::uniform_sections(m, 0.3, 0.5);
  std::vector<SupportStiffness> fixed(m.supports.size(), SupportStiffness::fixed());
  std::vector<SupportStiffness> stiff;
  for (std::size_t i = 0; i < m.supports.size(); ++i) {
    SupportStiffness s = restraint({true, true, false, false, false, true});
    s.springs = {0, 0, 1e12, 1e12, 1e12, 0};
    stiff.push_back(s);
  }
  const auto& combo = m.combinations.front();
  const auto rf = FrameAnalysis(m, sections, fixed).solve(combo);
  const auto rs = FrameAnalysis(m, sections, stiff).solve(combo);
  double norm = 0.0, diff = 0.0;
  for (std::size_t n = 0; n < rf.displacements.size(); ++n)
    for (int d = 0; d < 6; ++d) {
      norm = std::max(norm, std::abs(rf.displacements[n][d]));
      diff = std::max(diff, std::abs(rf.displacements[n][d] - rs.displacements[n][d]));
    }
  CHECK(diff <= 1e-4 * norm);
}

TEST_CASE("mechanisms are reported") {
  auto m = testing::single_beam(3.0);
  const LoadCase p{"p", {}, {{2, {0, 0, -1.0, 0, 0, 0}}}};
  std::vector<SupportStiffness> none(2);
  CHECK_THROWS_AS(solve_static(m, testing::uniform_sections(m, 0.3, 0.5), none, p), AnalysisError);
}
