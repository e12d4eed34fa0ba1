#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rcbbo/errors.hpp"
#include "rcbbo/foundation.hpp"

using namespace rcbbo;

namespace {

SoilProfile uniform_soil(SoilStrength first, SoilStrength second) {
  SoilProfile soil;
  soil.layers = {{30.0, first, second}};
  soil.settlement = {200.0, 0.02};
  soil.settlement_limit = 0.05;
  return soil;
}

Footing square(double size, double t) {
  Footing f;
  f.L = f.B = size;
  f.D = 1.5;
  f.t = t;
  f.column_x = f.column_y = 0.4;
  return f;
}

const CheckResult& named(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  return checks.front();
}

}  // namespace

TEST_CASE("bearing capacity closed forms") {
  BearingGeometry strip;
  strip.width = 1.5;
  CHECK(bearing_capacity({18.0, 100.0, 0.0}, strip) == doctest::Approx((std::numbers::pi + 2.0) * 100.0));
  CHECK(bearing_capacity({18.0, 100.0, 0.0}, strip) == doctest::Approx(514.16).epsilon(1e-4));
  CHECK(bearing_capacity({18.0, 0.0, 0.0}, strip) == 0.0);

  const double t30 = std::tan(std::numbers::pi / 6.0);
  const double nq = std::exp(std::numbers::pi * t30) * 3.0;  // tan²60° = 3
  const double ng = 1.5 * (nq - 1.0) * t30;
  CHECK(bearing_capacity({18.0, 0.0, 30.0}, strip) == doctest::Approx(0.5 * 18.0 * 1.5 * ng).epsilon(1e-12));

  // surcharge enters with Nq = 1 at φ = 0
  strip.surcharge = 27.0;
  CHECK(bearing_capacity({18.0, 100.0, 0.0}, strip) == doctest::Approx((std::numbers::pi + 2.0) * 100.0 + 27.0));

  // Nc is continuous at φ → 0
  CHECK(bearing_factors(1e-7).Nc == doctest::Approx(std::numbers::pi + 2.0).epsilon(1e-6));

  strip.width = 0.0;
  CHECK_THROWS_AS(bearing_capacity({18.0, 10.0, 20.0}, strip), GeometryError);
}

TEST_CASE("hyperbolic settlement law") {
  CHECK(settlement(300.0, 0.010, 200.0, 400.0) == doctest::Approx(0.030).epsilon(1e-12));
  CHECK(stiffness_coefficient(300.0, 0.010, 200.0, 400.0) == doctest::Approx(10000.0).epsilon(1e-12));
  CHECK(300.0 / settlement(300.0, 0.010, 200.0, 400.0) == doctest::Approx(10000.0).epsilon(1e-12));
  CHECK(settlement(200.0, 0.010, 200.0, 400.0) == 0.010);
  CHECK(stiffness_coefficient(200.0, 0.010, 200.0, 400.0) == doctest::Approx(20000.0).epsilon(1e-12));
  CHECK(settlement(0.0, 0.010, 200.0, 400.0) == 0.0);
  CHECK(stiffness_coefficient(1e-9, 0.010, 200.0, 400.0) == doctest::Approx(400.0 / 0.010).epsilon(1e-9));
  CHECK(settlement(0.999 * 400.0, 0.010, 200.0, 400.0) > 100 * 0.010);

  CHECK_THROWS_AS(settlement(400.0, 0.010, 200.0, 400.0), BearingFailure);
  CHECK_THROWS_AS(stiffness_coefficient(450.0, 0.010, 200.0, 400.0), BearingFailure);
  CHECK_THROWS_AS(settlement(100.0, 0.0, 200.0, 400.0), DomainError);
  CHECK_THROWS_AS(settlement(100.0, 0.01, 500.0, 400.0), DomainError);

  // s_lim = 0.025 against S = 0.030
  CHECK(CheckResult::make("settlement", 0.030, 0.025).ratio == doctest::Approx(1.2));
}

TEST_CASE("settlement is increasing and convex, stiffness decreasing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 50 + 300 * u(rng), q = r * (1.1 + 5 * u(rng)), sb = 0.005 + 0.05 * u(rng);
    double last_s = 0.0, last_k = std::numeric_limits<double>::infinity(), last_slope = 0.0;
    const double h = q / 50.0;
    for (int i = 1; i < 50; ++i) {
      const double p = i * h;
      const double s = settlement(p, sb, r, q);
      const double k = stiffness_coefficient(p, sb, r, q);
      CHECK(s > last_s);
      CHECK(k < last_k);
      CHECK(s - last_s > last_slope * (1 - 1e-12));
      last_slope = s - last_s;
      last_s = s;
      last_k = k;
    }
  }
}

TEST_CASE("centered vertical load passes overturning and sliding") {
  const auto soil = uniform_soil({18, 20, 25}, {18, 25, 27});
  const auto f = square(2.0, 0.5);
  const FootingLoad load{400.0, 0, 0, 0, 0};
  const auto r = geotechnical_checks(f, soil, soil.settlement, std::span(&load, 1), std::span(&load, 1), {});
  CHECK(named(r.checks, "overturning_L:ls1").ratio == 0.0);
  CHECK(named(r.checks, "overturning_B:ls2").ratio == 0.0);
  CHECK(named(r.checks, "sliding").ratio == 0.0);
  CHECK(r.pass());
  CHECK(r.pressure == doctest::Approx(100.0));
}

TEST_CASE("sliding at the boundary passes with ratio one") {
  const SoilStrength first{18.0, 20.0, 25.0};
  const auto soil = uniform_soil(first, {18, 25, 27});
  const auto f = square(2.0, 0.5);
  const double weight = 24.0 * (4.0 * 0.5 + 0.16 * 1.0) + 18.0 * 1.0 * (4.0 - 0.16);
  const double N = 600.0 + weight;
  const double c = first.cohesion, tanphi = std::tan(first.friction_deg * std::numbers::pi / 180.0);
  // H = 0.75·c·B·(L − 2·D·H/N) + N·tanφ solved for H
  const double H = (0.75 * c * 2.0 * 2.0 + N * tanphi) / (1.0 + 1.5 * c * 2.0 * 1.5 / N);
  const FootingLoad load{600.0, H, 0, 0, 0};
  const auto r = geotechnical_checks(f, soil, soil.settlement, std::span(&load, 1), {}, {});
  const auto& sliding = named(r.checks, "sliding");
  CHECK(sliding.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sliding.pass);
}

TEST_CASE("settlement check against an independent bearing calculation") {
  // cohesive soil: Nc = π + 2, Nq = 1, Nγ = 0
  const SoilStrength clay{19.0, 40.0, 0.0};
  auto soil = uniform_soil(clay, clay);
  soil.settlement = {60.0, 0.01};
  soil.settlement_limit = 0.02;
  const auto f = square(1.5, 0.4);
  const FootingLoad load{180.0, 0, 0, 0, 0};
  const auto r = geotechnical_checks(f, soil, soil.settlement, {}, std::span(&load, 1), {});

  const double k = 1.5 / 1.5;  // D/B = 1
  const double q_hand = 40.0 * (std::numbers::pi + 2.0) * (1.0 + 1.0 / (std::numbers::pi + 2.0)) * (1.0 + 0.4 * k) +
                        19.0 * 1.5;
  const double p = 180.0 / (1.5 * 1.5);
  const double s_hand = p * 0.01 * (q_hand / 60.0 - 1.0) / (q_hand - p);
  CHECK(r.q_ult == doctest::Approx(q_hand).epsilon(1e-12));
  CHECK(r.settlement == doctest::Approx(s_hand).epsilon(1e-12));
  CHECK(named(r.checks, "settlement").ratio == doctest::Approx(s_hand / 0.02).epsilon(1e-12));
  CHECK(named(r.checks, "linearity").advisory);
}

TEST_CASE("pressure beyond the bearing capacity is a bearing failure") {
  const SoilStrength clay{19.0, 10.0, 0.0};
  auto soil = uniform_soil(clay, clay);
  soil.settlement = {20.0, 0.01};
  const auto f = square(1.0, 0.4);
  const FootingLoad load{500.0, 0, 0, 0, 0};
  const auto r = geotechnical_checks(f, soil, soil.settlement, {}, std::span(&load, 1), {});
  CHECK(r.bearing_failure);
  CHECK_FALSE(r.pass());
}

TEST_CASE("punching shear against the hand calculation") {
  const auto f = square(2.0, 0.5);
  const FootingLoad load{1000.0, 0, 0, 0, 0};
  DesignSettings s;
  const auto r = structural_checks(f, std::span(&load, 1), s);
  const double d = 0.5 - 0.075 - 0.016;
  const double force = 250.0 * (4.0 - (0.4 + d) * (0.4 + d));
  CHECK(force == doctest::Approx(836.38).epsilon(1e-4));
  const auto& punching = named(r.checks, "punching");
  CHECK(punching.demand == doctest::Approx(force / (2.0 * (0.8 + 2.0 * d) * d)).epsilon(1e-12));
  CHECK(punching.capacity == doctest::Approx(0.75 * 0.33 * 5.0 * 1000.0).epsilon(1e-12));
  // one-way shear at d from the face
  CHECK(named(r.checks, "one_way_shear_L").demand == doctest::Approx(250.0 * 2.0 * (0.8 - d)).epsilon(1e-12));
}

TEST_CASE("structural checks under zero and symmetric loads") {
  auto f = square(2.0, 0.5);
  const FootingLoad zero{};
  for (const auto& c : structural_checks(f, std::span(&zero, 1), {}).checks) CHECK(c.pass);

  const FootingLoad load{800.0, 0, 0, 0, 0};
  CHECK(design_footing_reinforcement(f, std::span(&load, 1), {}).empty());
  const auto r = structural_checks(f, std::span(&load, 1), {});
  CHECK(named(r.checks, "flexure_L").ratio == doctest::Approx(named(r.checks, "flexure_B").ratio).epsilon(1e-12));
  CHECK(named(r.checks, "one_way_shear_L").ratio ==
        doctest::Approx(named(r.checks, "one_way_shear_B").ratio).epsilon(1e-12));
  CHECK(r.pass());

  f.column_x = 3.0;
  CHECK_THROWS_AS(structural_checks(f, std::span(&load, 1), {}), GeometryError);
}

TEST_CASE("sizing picks the smallest passing width on the grid") {
  const auto soil = uniform_soil({18, 15, 24}, {18.5, 20, 26});
  DesignSettings s;
  FootingRequest req;
  req.column_x = req.column_y = 0.4;
  for (double N : {150.0, 400.0, 900.0}) {
    const FootingLoad first{1.4 * N, 12.0, 0, 0, 8.0};
    const FootingLoad second{N, 8.0, 0, 0, 5.0};
    const auto sized = size_footing(soil, soil.settlement, req, std::span(&first, 1), std::span(&second, 1), s);
    REQUIRE(sized.feasible);

    double oracle = 0.0;
    for (int i = 12; i <= 100; ++i) {
      Footing f;
      f.B = f.L = i * 0.05;
      f.D = req.depth;
      f.t = s.footing_min_thickness;
      f.column_x = f.column_y = 0.4;
      if (f.L < 0.4) continue;
      if (geotechnical_checks(f, soil, soil.settlement, std::span(&first, 1), std::span(&second, 1), s).pass()) {
        oracle = f.B;
        break;
      }
    }
    CHECK(sized.footing.B == doctest::Approx(oracle));
    CHECK(sized.footing.L == doctest::Approx(sized.footing.B));
  }
}

TEST_CASE("sizing is monotone in the vertical load") {
  const auto soil = uniform_soil({18, 15, 24}, {18.5, 20, 26});
  FootingRequest req;
  req.rectangularity = 1.3;
  req.column_x = req.column_y = 0.4;
  double last = 0.0;
  for (double N = 100.0; N <= 1600.0; N *= 2.0) {
    const FootingLoad first{1.4 * N, 0, 0, 0, 0};
    const FootingLoad second{N, 0, 0, 0, 0};
    const auto sized = size_footing(soil, soil.settlement, req, std::span(&first, 1), std::span(&second, 1), {});
    CHECK(sized.footing.B >= last);
    CHECK(sized.footing.L == doctest::Approx(1.3 * sized.footing.B));
    last = sized.footing.B;
  }
}

TEST_CASE("footing loads from reactions") {
  const Dof6 reaction{-5.0, 2.0, 300.0, 4.0, -7.0, 1.0};
  const auto l = footing_load_from_reaction(reaction);
  CHECK(l.N == 300.0);
  CHECK(l.Hx == 5.0);
  CHECK(l.Hy == -2.0);
  CHECK(l.Mx == -4.0);
  CHECK(l.My == 7.0);
}
