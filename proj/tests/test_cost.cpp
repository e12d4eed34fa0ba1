#include <doctest.h>

#include <cmath>
#include <random>

#include "rcbbo/cost.hpp"
#include "rcbbo/errors.hpp"

using namespace rcbbo;

namespace {

UnitCosts flat_costs(double v) {
  ElementUnitCosts e;
  e.formwork = e.stirrup_elaboration = e.stirrup_placement = e.bar_elaboration = e.bar_placement = v;
  e.concrete_placement = v;
  e.concrete_elaboration = {{25.0, v}, {30.0, v}};
  return {e, e, e, v, v};
}

ReinforcementLayout beam_layout() {
  ReinforcementLayout lay;
  lay.bottom = {16, 4};
  lay.top = {13, 2};
  lay.stirrups = {10, 0.15, 2};
  return lay;
}

QuantityTakeoff sample_takeoff() {
  DesignSettings s;
  QuantityTakeoff t;
  t.items.push_back(beam_quantities(1, 6.0, make_section(0.3, 0.5, 25.0), beam_layout(), s));
  ColumnReinforcement col;
  col.diameter = 16;
  col.bars_per_face = 3;
  col.ties = {10, 0.2, 2};
  t.items.push_back(column_quantities(2, 3.0, make_section(0.4, 0.4, 30.0), col, s));
  Footing f;
  f.L = 2.0;
  f.B = 1.6;
  f.t = 0.5;
  f.D = 1.5;
  f.column_x = f.column_y = 0.4;
  f.bars_L = {13, 8};
  f.bars_B = {13, 9};
  t.items.push_back(footing_quantities(3, f, s));
  return t;
}

}  // namespace

TEST_CASE("beam quantities") {
  DesignSettings s;
  const auto q = beam_quantities(1, 6.0, make_section(0.3, 0.5, 25.0), beam_layout(), s);
  CHECK(q.concrete == doctest::Approx(0.9));
  CHECK(q.formwork == doctest::Approx((2 * 0.5 + 0.3) * 6.0));
  // bottom bars alone: 4·6·2.01e-4·7850 ≈ 37.9 kg
  CHECK(steel_mass(6.0, 4 * bar_area(16), s) == doctest::Approx(37.9).epsilon(2e-3));
  const double top = steel_mass(2 * 0.3 * 6.0, 2 * bar_area(13), s);
  CHECK(q.bar_mass == doctest::Approx(steel_mass(6.0, 4 * bar_area(16), s) + top));
  const int stirrups = 41;  // 40 spaces of 0.15 m
  const double perimeter = 2 * (0.3 - 0.08) + 2 * (0.5 - 0.08);
  CHECK(q.stirrup_mass == doctest::Approx(stirrups * perimeter * bar_area(10) * 7850.0));
}

TEST_CASE("footing quantities") {
  DesignSettings s;
  const auto t = sample_takeoff();
  const auto& q = t.items[2];
  const double slab = 2.0 * 1.6 * 0.5, stub = 0.16 * 1.0;
  CHECK(q.concrete == doctest::Approx(slab + stub));
  CHECK(q.formwork == doctest::Approx(2 * (2.0 + 1.6) * 0.5 + 2 * 0.8 * 1.0));
  CHECK(q.excavation == doctest::Approx(2.6 * 2.2 * 1.5));
  CHECK(q.refill == doctest::Approx(2.6 * 2.2 * 1.5 - slab - stub));
  CHECK(q.bar_mass == doctest::Approx(steel_mass(1.85, 8 * bar_area(13), s) + steel_mass(1.45, 9 * bar_area(13), s)));
}

TEST_CASE("direct cost terms") {
  QuantityTakeoff two;
  ElementQuantities beam;
  beam.concrete = 0.9;
  two.items = {beam, beam};
  UnitCosts c;
  c.beams.concrete_elaboration = {{25.0, 100.0}};
  const auto b = direct_cost(two, c);
  double concrete_el = 0.0;
  for (const auto& t : b.terms)
    if (t.name == "beams.concrete_elaboration") concrete_el = t.value;
  CHECK(concrete_el == doctest::Approx(180.0));
  CHECK(b.total == doctest::Approx(180.0));

  CHECK(direct_cost(sample_takeoff(), flat_costs(0.0)).total == 0.0);
}

TEST_CASE("cost is linear in the unit costs and sums its terms") {
  const auto t = sample_takeoff();
  const auto one = direct_cost(t, flat_costs(1.0));
  const auto two = direct_cost(t, flat_costs(2.0));
  CHECK(two.total == doctest::Approx(2.0 * one.total).epsilon(1e-12));
  double sum = 0.0;
  for (const auto& term : one.terms) sum += term.value;
  CHECK(std::abs(sum - one.total) <= 1e-9 * one.total);
  CHECK(one.formwork + one.steel + one.concrete + one.earthwork == doctest::Approx(one.total).epsilon(1e-12));
  CHECK(one.beams + one.columns + one.foundations == doctest::Approx(one.total).epsilon(1e-12));
}

TEST_CASE("cost is monotone in quantities and prices") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const auto base = sample_takeoff();
  const auto prices = flat_costs(3.0);
  const double f0 = direct_cost(base, prices).total;
  for (int trial = 0; trial < 50; ++trial) {
    auto t = base;
    auto& q = t.items[trial % 3];
    q.concrete *= 1.0 + u(rng);
    q.bar_mass *= 1.0 + u(rng);
    CHECK(direct_cost(t, prices).total >= f0);
    auto p = prices;
    p.columns.formwork += u(rng);
    p.refill += u(rng);
    CHECK(direct_cost(base, p).total >= f0);
  }
}

TEST_CASE("missing concrete grade is a config error") {
  auto c = flat_costs(1.0);
  c.columns.concrete_elaboration = {{25.0, 1.0}};
  CHECK_THROWS_AS(direct_cost(sample_takeoff(), c), ConfigError);
}

TEST_CASE("penalty") {
  DesignSettings s;
  std::vector<CheckResult> checks{CheckResult::make("a", 1.0, 2.0)};
  CHECK(penalize(500.0, checks, s) == 500.0);

  checks.push_back(CheckResult::make("b", 1.1, 1.0));
  CHECK(penalize(500.0, checks, s) == doctest::Approx(1000.0).epsilon(1e-12));

  auto advisory = CheckResult::make("c", 5.0, 1.0);
  advisory.advisory = true;
  checks.push_back(advisory);
  CHECK(penalize(500.0, checks, s) == doctest::Approx(1000.0).epsilon(1e-12));

  double last = 500.0;
  for (double r = 1.0; r <= 3.0; r += 0.25) {
    const CheckResult c = CheckResult::make("x", r, 1.0);
    const double v = penalize(500.0, std::span(&c, 1), s);
    CHECK(v >= last);
    last = v;
  }
}
