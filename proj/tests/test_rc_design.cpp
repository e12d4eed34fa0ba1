#include <doctest.h>

#include <cmath>
#include <random>

#include "rcbbo/rc_design.hpp"
#include "support.hpp"

using namespace rcbbo;

namespace {

ReinforcementLayout layout_at(double d) {
  ReinforcementLayout lay;
  lay.bottom = {16, 0};
  lay.d = d;
  lay.stirrups = {10, 0.2, 2};
  return lay;
}

// Hand stress-block oracle for a singly reinforced, tension-controlled section.
double hand_phi_mn(double As, double b, double d, double fc, double fy) {
  const double a = As * fy * 1000.0 / (0.85 * fc * 1000.0 * b);
  return 0.9 * As * fy * 1000.0 * (d - a / 2.0);
}

}  // namespace

TEST_CASE("beam flexure matches the stress-block hand calculation") {
  const auto s = make_section(0.30, 0.50, 25.0);
  ReinforcementLayout lay = layout_at(0.45);
  lay.bottom = {16, 5};
  const double As = lay.As();
  const auto r = check_beam_flexure(s, lay, 150.0);
  CHECK(r.capacity == doctest::Approx(hand_phi_mn(As, 0.30, 0.45, 25, 420)).epsilon(1e-6));

  // the exact 1.0e-3 m² case via the section routine
  const SteelLayer layer{1.0e-3, 0.45};
  const auto st = pure_bending(0.30, 0.50, 25.0, 420.0, 200000.0, std::span<const SteelLayer>(&layer, 1));
  CHECK(0.9 * st.M == doctest::Approx(157.65).epsilon(1e-3));
  CHECK(0.9 * st.M == doctest::Approx(hand_phi_mn(1.0e-3, 0.30, 0.45, 25, 420)).epsilon(1e-6));
  CHECK(r.pass);
}

TEST_CASE("beam flexure limits") {
  const auto s = make_section(0.30, 0.50, 25.0);
  ReinforcementLayout none = layout_at(0.45);
  const auto fail = check_beam_flexure(s, none, 10.0);
  CHECK(fail.capacity == 0.0);
  CHECK_FALSE(fail.pass);
  CHECK(check_beam_flexure(s, none, 0.0).pass);
}

TEST_CASE("flexural capacity grows with steel area") {
  const auto s = make_section(0.30, 0.60, 25.0);
  double last = 0.0;
  for (int n = 2; n <= 8; ++n) {
    ReinforcementLayout lay = layout_at(0.54);
    lay.bottom = {19, n};
    const double cap = check_beam_flexure(s, lay, 1.0).capacity;
    CHECK(cap >= last);
    last = cap;
  }
}

TEST_CASE("shear capacity") {
  CHECK(concrete_shear_capacity(25.0, 0.30, 0.45) == doctest::Approx(114.75).epsilon(1e-12));
  const auto s = make_section(0.30, 0.50, 25.0);
  ReinforcementLayout lay = layout_at(0.45);
  lay.bottom = {16, 3};
  lay.stirrups = {10, 0.2, 0};
  const auto vc_only = check_beam_shear(s, lay, 50.0);
  CHECK(vc_only.capacity == doctest::Approx(0.75 * 114.75).epsilon(1e-9));
  CHECK(check_beam_shear(s, lay, 0.0).pass);

  lay.stirrups = {10, 0.2, 2};
  const double vs = 2 * bar_area(10) * 420e3 * 0.45 / 0.2;
  CHECK(check_beam_shear(s, lay, 50.0).capacity == doctest::Approx(0.75 * (114.75 + vs)).epsilon(1e-9));
}

TEST_CASE("column axial capacity") {
  const auto s = make_section(0.40, 0.40, 25.0);
  ColumnReinforcement none;
  none.ties = {10, 0.2, 2};
  const auto plain = interaction_diagram(s, none, BendingAxis::strong);
  CHECK(plain.phiP0 / 0.65 == doctest::Approx(3400.0).epsilon(1e-12));

  ColumnReinforcement cage;
  cage.diameter = 19;
  cage.bars_per_face = 3;
  cage.edge_distance = 0.04 + 0.010 + 0.0095;
  cage.ties = {10, 0.2, 2};
  const double Ast = 8 * bar_area(19);
  const double p0 = 0.65 * (0.85 * 25e3 * 0.16 + Ast * 420e3);
  CHECK(interaction_diagram(s, cage, BendingAxis::strong).phiP0 == doctest::Approx(p0).epsilon(1e-12));
  CHECK(check_column(s, cage, 0.999 * p0, 0.0).pass);
  CHECK_FALSE(check_column(s, cage, 1.001 * p0, 0.0).pass);
}

TEST_CASE("column at zero axial load behaves like a beam") {
  const auto s = make_section(0.40, 0.50, 25.0);
  ColumnReinforcement cage;
  cage.diameter = 16;
  cage.bars_per_face = 3;
  cage.edge_distance = 0.058;
  cage.ties = {10, 0.2, 2};
  const auto layers = cage.layers(0.50);
  const double phi_mn = 0.9 * pure_bending(0.40, 0.50, 25.0, 420.0, 200000.0, layers).M;
  const auto r = check_column(s, cage, 0.0, 1.0);
  CHECK(r.capacity == doctest::Approx(phi_mn).epsilon(0.03));
}

TEST_CASE("serviceability limits") {
  auto m = testing::single_beam(6.0);
  m.height = 9.0;
  const LoadCase none{"none", {}, {}};
  const auto r = solve_static(m, testing::uniform_sections(m, 0.3, 0.5),
                              {SupportStiffness::fixed(), SupportStiffness::fixed()}, none);
  const auto checks = check_serviceability(r, m);
  REQUIRE(checks.size() == 2);
  CHECK(checks[0].capacity == doctest::Approx(6.0 / 180.0));
  CHECK(checks[1].capacity == doctest::Approx(0.02));
  for (const auto& c : checks) CHECK(c.pass);
}

TEST_CASE("reinforcement selection") {
  FaceConstraints face;
  face.width = 0.40;
  face.catalog = {16};
  const auto four = select_reinforcement(8.0e-4, face);
  REQUIRE(four);
  CHECK(*four == BarGroup{16, 4});
  CHECK(four->area() == doctest::Approx(8.04e-4).epsilon(1e-3));

  FaceConstraints single;
  single.width = 0.40;
  single.min_bars = 1;
  const auto one = select_reinforcement(1.6e-4, single);
  REQUIRE(one);
  CHECK(*one == BarGroup{16, 1});

  FaceConstraints std_face;
  std_face.width = 0.30;
  const auto min = select_reinforcement(0.0, std_face);
  REQUIRE(min);
  CHECK(*min == BarGroup{10, 2});

  FaceConstraints narrow;
  narrow.width = 0.30;
  CHECK_FALSE(select_reinforcement(1.0, narrow));
}

TEST_CASE("reinforcement selection is minimal against brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> width(0.2, 0.8), area(0.0, 4e-3);
  for (int trial = 0; trial < 300; ++trial) {
    FaceConstraints face;
    face.width = 0.05 * std::round(width(rng) / 0.05);
    const double need = area(rng);
    const auto got = select_reinforcement(need, face);
    // independent enumeration of every count and diameter
    double best = std::numeric_limits<double>::infinity();
    const double avail = face.width - 2 * face.cover - 2 * face.stirrup_diameter / 1000.0;
    for (int dia : face.catalog)
      for (int n = face.min_bars; n <= face.max_bars; ++n) {
        const double db = dia / 1000.0;
        if (n * db + (n - 1) * std::max(face.min_clear, db) > avail + 1e-12) continue;
        const double a = n * bar_area(dia);
        if (a >= need && a < best) best = a;
      }
    if (std::isinf(best)) {
      CHECK_FALSE(got);
    } else {
      REQUIRE(got);
      CHECK(got->area() >= need);
      CHECK(got->area() == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("designed beams pass their own checks") {
  const auto s = make_section(0.30, 0.55, 25.0);
  DesignSettings settings;
  const auto d = design_beam(s, {80.0, 120.0, 110.0}, settings);
  for (const auto& c : d.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(d.layout.As() >= 0.5 * settings.beam_min_ratio * 0.30 * 0.55);
}

TEST_CASE("designed columns pass their own checks") {
  const auto s = make_section(0.40, 0.40, 25.0);
  const ColumnDemand demands[] = {{900.0, 60.0, 10.0}, {300.0, 90.0, 5.0}};
  const auto d = design_column(s, demands, DesignSettings{});
  for (const auto& c : d.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(d.layout.area() >= 0.01 * 0.16);
}
