#include <doctest.h>

#include <cmath>

#include "rcbbo/errors.hpp"
#include "rcbbo/sssi.hpp"
#include "support.hpp"

using namespace rcbbo;

namespace {

SoilProfile soil_with(double sbar) {
  SoilProfile soil;
  soil.layers = {{20.0, {18.0, 15.0, 24.0}, {18.5, 20.0, 26.0}}};
  soil.settlement = {200.0, sbar};
  return soil;
}

Footing pad(double size) {
  Footing f;
  f.L = f.B = size;
  f.D = 1.5;
  f.t = 0.5;
  f.column_x = 0.5;
  f.column_y = 0.3;
  return f;
}

struct Portal {
  StructuralModel model = testing::portal(6.0, 3.5, 40.0);
  std::vector<MemberSection> sections = testing::uniform_sections(model, 0.3, 0.5);
  std::vector<std::size_t> supports{0, 1};
  std::vector<Footing> footings{pad(1.6), pad(1.6)};
  const Combination& service() const { return model.combinations[1]; }
};

double max_rel_diff(const InternalForces& a, const InternalForces& b) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t m = 0; m < a.members.size(); ++m)
    for (std::size_t k = 0; k < a.members[m].stations.size(); ++k) {
      const auto& x = a.members[m].stations[k];
      const auto& y = b.members[m].stations[k];
      for (auto [u, v] : {std::pair{x.N, y.N}, {x.Mw, y.Mw}, {x.Vv, y.Vv}}) {
        scale = std::max(scale, std::abs(u));
        diff = std::max(diff, std::abs(u - v));
      }
    }
  return diff / scale;
}

}  // namespace

TEST_CASE("stiffness update rule") {
  const SettlementParameters sp{200.0, 0.01};
  CHECK(next_stiffness(150.0, -0.001, sp, 600.0) == 0.0);
  CHECK(next_stiffness(200.0, 0.01, sp, 600.0) == doctest::Approx(200.0 / 0.01).epsilon(1e-12));
  // depends on P only
  CHECK(next_stiffness(120.0, 0.004, sp, 600.0) == next_stiffness(120.0, 0.009, sp, 600.0));
  CHECK_THROWS_AS(next_stiffness(600.0, 0.01, sp, 600.0), BearingFailure);
}

TEST_CASE("Winkler springs follow the footing plan") {
  Portal p;
  Footing f = pad(2.0);
  f.L = 2.5;
  const std::vector<Footing> fs{f, f};
  const double k[] = {1000.0, 2000.0};
  const auto s = winkler_supports(p.model, p.supports, fs, k);
  CHECK(s[1].springs[2] == doctest::Approx(2000.0 * 2.5 * 2.0));
  CHECK(s[1].springs[3] == doctest::Approx(2000.0 * 2.5 * 8.0 / 12.0));
  CHECK(s[1].springs[4] == doctest::Approx(2000.0 * 2.0 * std::pow(2.5, 3) / 12.0));
  CHECK(s[0].restrained[0]);
  CHECK(s[0].restrained[5]);
  CHECK_FALSE(s[0].restrained[2]);
}

TEST_CASE("first coefficient from the fixed-support reaction") {
  StructuralModel m;
  m.height = 3.0;
  m.nodes = {{1, {0, 0, 0}}, {2, {0, 0, 3}}};
  m.members = {{1, 1, 2, MemberRole::column, "C", std::nullopt}};
  Support base;
  base.node = 1;
  m.supports = {base};
  m.load_cases = {{"p", {}, {{2, {0, 0, -300.0, 0, 0, 0}}}}};
  m.combinations = {{"P", CombinationKind::service, {{"p", 1.0}}}};
  const auto soil = soil_with(0.02);
  const std::vector<Footing> fs{pad(2.0)};
  const std::size_t sup[] = {0};
  const auto r = iterate_sssi(m, testing::uniform_sections(m, 0.3, 0.5), soil, sup, fs, m.combinations[0], {});

  const double P = 300.0 / 4.0;
  const double q = service_bearing_capacity(fs[0], soil, {300.0, 0, 0, 0, 0});
  const double k1 = (q - P) / (0.02 * (q / 200.0 - 1.0));
  REQUIRE(r.trace.size() >= 2);
  CHECK(std::isinf(r.trace[0].k));
  CHECK(r.trace[1].k == doctest::Approx(k1).epsilon(1e-12));
  // an axial load on a single column does not change with the spring
  CHECK(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.trace[1].settlement == doctest::Approx(P / k1).epsilon(1e-9));
}

TEST_CASE("symmetric portal keeps mirrored coefficients") {
  Portal p;
  const auto soil = soil_with(0.02);
  const auto r = iterate_sssi(p.model, p.sections, soil, p.supports, p.footings, p.service(), {});
  REQUIRE(r.converged);
  CHECK(r.iterations <= 20);
  for (std::size_t i = 0; i + 1 < r.trace.size(); i += 2) {
    CHECK(r.trace[i].iteration == r.trace[i + 1].iteration);
    if (!std::isinf(r.trace[i].k)) CHECK(std::abs(r.trace[i].k - r.trace[i + 1].k) <= 1e-9 * r.trace[i].k);
    CHECK(std::abs(r.trace[i].settlement - r.trace[i + 1].settlement) <= 1e-9 * std::abs(r.trace[i].settlement) + 1e-15);
  }
  CHECK(std::abs(r.states[0].k - r.states[1].k) <= 1e-9 * r.states[0].k);
}

TEST_CASE("converged coefficients are a fixed point") {
  Portal p;
  // a lateral load breaks the symmetry so more than one update is needed
  p.model.load_cases.push_back({"wind", {}, {{3, {30.0, 0, 0, 0, 0, 0}}}});
  p.model.combinations[1].factors["wind"] = 1.0;
  const auto soil = soil_with(0.03);
  SssiOptions opt;
  const auto r = iterate_sssi(p.model, p.sections, soil, p.supports, p.footings, p.service(), opt);
  REQUIRE(r.converged);
  const auto forces = FrameAnalysis(p.model, p.sections, r.supports).solve(p.service());
  for (std::size_t i = 0; i < 2; ++i) {
    const auto load = footing_load_from_reaction(forces.reactions[i]);
    const double P = load.N / (p.footings[i].L * p.footings[i].B);
    const double q = service_bearing_capacity(p.footings[i], soil, load);
    const double k = next_stiffness(P, -forces.displacements[i][2], soil.settlement, q);
    CHECK(std::abs(k - r.states[i].k) < opt.tolerance * r.states[i].k);
  }
}

TEST_CASE("a unit tolerance stops after the second analysis") {
  Portal p;
  SssiOptions opt;
  opt.tolerance = 1.0;
  const auto r = iterate_sssi(p.model, p.sections, soil_with(0.02), p.supports, p.footings, p.service(), opt);
  CHECK(r.converged);
  CHECK(r.iterations == 2);
}

TEST_CASE("near-rigid soil reproduces the fixed-support forces") {
  Portal p;
  const auto r = iterate_sssi(p.model, p.sections, soil_with(1e-9), p.supports, p.footings, p.service(), {});
  REQUIRE(r.converged);
  CHECK(r.iterations == 2);
  std::vector<SupportStiffness> fixed(2, SupportStiffness::fixed());
  const auto rigid = FrameAnalysis(p.model, p.sections, fixed).solve(p.service());
  const auto soft = FrameAnalysis(p.model, p.sections, r.supports).solve(p.service());
  CHECK(max_rel_diff(soft, rigid) < 1e-3);
}

TEST_CASE("bearing failure stops the iteration") {
  Portal p;
  p.footings = {pad(2.0), pad(2.0)};
  p.model.load_cases[0].member_loads[0].w = {0, 0, -900.0};
  SoilProfile weak = soil_with(0.02);
  weak.layers[0].second_ls = {18.0, 5.0, 5.0};
  weak.settlement.linearity_limit = 20.0;
  const auto r = iterate_sssi(p.model, p.sections, weak, p.supports, p.footings, p.service(), {});
  CHECK(r.bearing_failure);
  CHECK_FALSE(r.converged);
}
