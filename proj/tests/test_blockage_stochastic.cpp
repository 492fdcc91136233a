#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wearnet/blockage_stochastic.hpp"

using namespace wearnet;
using Eigen::Vector2d;

namespace {

BlockageParams table_params(int k, double rw) { return {0.5, rw, k, 80.0}; }

// Area of the capsule of radius D/2 around [0, length] on the x axis, minus
// the disk of radius D + r_w at the origin, by midpoint integration over x.
double numeric_free_capsule(double length, const BlockageParams& p) {
  const double c = p.diameter / 2;
  const double r = p.exclusion_radius();
  constexpr int kSteps = 2000000;
  const double lo = -c;
  const double hi = length + c;
  const double dx = (hi - lo) / kSteps;
  double area = 0;
  for (int i = 0; i < kSteps; ++i) {
    const double x = lo + (i + 0.5) * dx;
    double h = c;
    if (x < 0) h = std::sqrt(std::max(c * c - x * x, 0.0));
    if (x > length) h = std::sqrt(std::max(c * c - (x - length) * (x - length), 0.0));
    const double hole = std::abs(x) < r ? std::sqrt(r * r - x * x) : 0.0;
    area += 2 * std::max(0.0, h - hole) * dx;
  }
  return area;
}

// Fraction of uniformly placed own-body circles (centre at D/2 + r_w) that
// cut a capsule of length `reach` anchored at the wearable.
double rotating_circle_mc(double reach, double rw, double d, int draws, Rng& rng) {
  const double radius = d / 2 + rw;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const double phi = rng.uniform(0, 2 * oracle::kPi);
    const Vector2d c(radius * std::cos(phi), radius * std::sin(phi));
    if (oracle::segment_distance(Vector2d::Zero(), Vector2d(reach, 0), c) < d / 2) ++hits;
  }
  return static_cast<double>(hits) / draws;
}

}  // namespace

TEST_SUITE("blockage-stochastic") {

TEST_CASE("self-body probability") {
  CHECK(p_self_body(0.0, 0.5) == doctest::Approx(0.5));
  CHECK(p_self_body(0.1, 0.5) == doctest::Approx(0.25324828557115014).epsilon(1e-14));
  CHECK(p_self_body(1e9, 0.5) < 1e-9);
  double prev = 1;
  for (double rw = 0; rw < 2; rw += 0.01) {
    const double p = p_self_body(rw, 0.5);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("self-body probability against a rotating circle") {
  Rng rng(9);
  constexpr int kDraws = 400000;
  const double mc = rotating_circle_mc(10.0, 0.1, 0.5, kDraws, rng);
  const double p = p_self_body(0.1, 0.5);
  CHECK(std::abs(mc - p) < 3 * std::sqrt(p * (1 - p) / kDraws));
}

TEST_CASE("direct path, single wearer") {
  const auto p = table_params(1, 0.0);
  CHECK(p_direct_blocked(3.0, p) == doctest::Approx(0.75));
  CHECK(p_direct_blocked(0.1, p) == p_direct_blocked(9.0, p));
  CHECK(p_wall_reflection_blocked(7.0, p) == doctest::Approx(0.75));
}

TEST_CASE("direct path is monotone in distance and K") {
  for (int k : {2, 5, 20, 50}) {
    const auto p = table_params(k, 0.1);
    double prev = 0;
    for (double r = 0; r < 20; r += 0.05) {
      const double q = p_direct_blocked(r, p);
      CHECK(q >= prev);
      CHECK(q <= 1);
      prev = q;
    }
  }
  for (double r : {0.5, 2.0, 8.0}) {
    double prev = 0;
    for (int k = 1; k <= 60; ++k) {
      const double q = p_direct_blocked(r, table_params(k, 0.1));
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("other-body probabilities clamp and count") {
  const auto p = table_params(10, 0.1);
  ClampTally tally;
  CHECK(p_other_body(0.0, p, &tally) == 0.0);  // negative before clamping
  CHECK(tally.count == 1);
  CHECK(p_other_body(1000.0, p, &tally) == 1.0);
  CHECK(tally.count == 2);
  CHECK(p_other_body(3.0, p, &tally) > 0);
  CHECK(tally.count == 2);
}

TEST_CASE("free capsule area") {
  for (double rw : {0.0, 0.02, 0.1, 0.5}) {
    const auto p = table_params(10, rw);
    const double reach_out = std::sqrt(std::pow(p.exclusion_radius(), 2) - 0.0625);
    for (double len : {0.05, 0.3, 0.5, 0.6, 0.75, reach_out, 1.0, 2.5, 7.0}) {
      CAPTURE(rw);
      CAPTURE(len);
      CHECK(p.free_capsule_area(len) == doctest::Approx(numeric_free_capsule(len, p)).epsilon(1e-6).scale(1e-3));
      if (len >= reach_out)
        CHECK(p.free_capsule_area(len) == doctest::Approx(len * p.diameter - p.overlap_area()).epsilon(1e-10));
    }
    CHECK(p.free_capsule_area(0.0) == 0.0);
  }
}

TEST_CASE("ceiling self-body branches") {
  const auto p = table_params(10, 0.1);
  const double full = p_self_body(0.1, 0.5);
  const double edge = std::sqrt(0.1 * 0.6);
  auto comps = p_ceiling_components({0.05, 0.05}, p);
  CHECK(comps.self_receiver == 0.0);
  CHECK(comps.self_transmitter == 0.0);
  comps = p_ceiling_components({edge, 3.0}, p);
  CHECK(comps.self_receiver == doctest::Approx(full));
  CHECK(comps.self_transmitter == doctest::Approx(full));
  // Continuity at the branch edge.
  comps = p_ceiling_components({edge * (1 - 1e-9), 0.1 * (1 + 1e-9)}, p);
  CHECK(comps.self_receiver == doctest::Approx(full).epsilon(1e-4));
  CHECK(comps.self_transmitter == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("ceiling self-body against a rotating circle") {
  Rng rng(12);
  constexpr int kDraws = 200000;
  const auto p = table_params(10, 0.1);
  for (double reach : {0.12, 0.16, 0.2, 0.24, 0.4}) {
    CAPTURE(reach);
    const double q = p_ceiling_components({reach, 0.0}, p).self_receiver;
    const double mc = rotating_circle_mc(reach, 0.1, 0.5, kDraws, rng);
    CHECK(std::abs(mc - q) < 3 * std::sqrt(std::max(q * (1 - q), 1e-6) / kDraws) + 1e-4);
  }
}

TEST_CASE("auxiliary factors recombine into the direct-path law") {
  for (int k : {1, 5, 20, 50}) {
    for (double rw : {0.02, 0.1}) {
      const auto p = table_params(k, rw);
      for (double a : {0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.8}) {
        for (double b : {0.0, 0.12, 0.25, 0.6}) {
          for (double r : {1.0, 2.5, 6.0}) {
            const CeilingReach reach{a, b};
            ClampTally tally;
            const auto ceiling = p_ceiling_components(reach, p, &tally);
            const auto aux = p_direct_given_ceiling_clear(reach, r, p, &tally);
            const double total = 1 - (1 - ceiling.blocked()) * (1 - aux.blocked());
            CAPTURE(k);
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(r);
            // Disjoint ceiling capsules inside the direct capsule, the
            // transmitter-side one clear of the exclusion disk.
            if (a + b + p.diameter <= r && r - b - p.diameter / 2 >= p.exclusion_radius()) CHECK(tally.count == 0);
            if (tally.count == 0) CHECK(total == doctest::Approx(p_direct_blocked(r, p)).epsilon(1e-12));
            else CHECK(total >= p_direct_blocked(r, p) - 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("auxiliary self terms vanish once the ceiling capsule covers them") {
  const auto p = table_params(10, 0.1);
  const double edge = std::sqrt(0.1 * 0.6);
  const auto aux = p_direct_given_ceiling_clear({edge, edge + 1}, 3.0, p);
  CHECK(aux.self_receiver == 0.0);
  CHECK(aux.self_transmitter == 0.0);
  const auto short_aux = p_direct_given_ceiling_clear({0.05, 0.05}, 3.0, p);
  CHECK(short_aux.self_receiver == doctest::Approx(p_self_body(0.1, 0.5)));
}

TEST_CASE("correlated draw: ceiling blockage implies direct blockage, total law holds") {
  const auto p = table_params(20, 0.1);
  const CeilingReach reach{0.3, 0.6};
  const auto ceiling = p_ceiling_components(reach, p);
  const auto aux = p_direct_given_ceiling_clear(reach, 2.0, p);
  const double want = ceiling.blocked() + aux.blocked() * (1 - ceiling.blocked());
  constexpr int kDraws = 1000000;
  Rng rng(55);
  int direct_blocked = 0;
  int ceiling_blocked = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = sample_correlated_direct_and_ceiling(ceiling, aux, rng);
    REQUIRE((d.ceiling_clear || !d.direct_clear));
    direct_blocked += !d.direct_clear;
    ceiling_blocked += !d.ceiling_clear;
  }
  const double sigma = std::sqrt(want * (1 - want) / kDraws);
  CHECK(std::abs(static_cast<double>(direct_blocked) / kDraws - want) < 3 * sigma);
  const double pc = ceiling.blocked();
  CHECK(std::abs(static_cast<double>(ceiling_blocked) / kDraws - pc) < 3 * std::sqrt(pc * (1 - pc) / kDraws));
  CHECK(want == doctest::Approx(p_direct_blocked(2.0, p)).epsilon(1e-12));
}

TEST_CASE("sampled interferer states tie the floor to the direct path") {
  const auto p = table_params(20, 0.1);
  const InterfererLinkSummary link{2.0, {3.0, 4.0, 2.5, 2.6}, {0.3, 0.6}};
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_interferer_blockage(link, p, rng);
    REQUIRE(s.reflected(Surface::kFloor) == s.direct());
    if (s.reflected(Surface::kCeiling) == 0) REQUIRE(s.direct() == 0);
  }
}

TEST_CASE("signal wall reflections") {
  const auto none = table_params(0, 0.1);
  const double self = (std::asin(0.2 / 0.7) + std::asin(0.5 / 0.7)) / oracle::kPi;
  CHECK(p_signal_wall_blocked(5.0, 0.2, none) == doctest::Approx(self));
  CHECK(p_signal_wall_blocked(5.0, 0.2, table_params(0, 1e9)) < 1e-8);
  ClampTally tally;
  p_signal_wall_blocked(5.0, 0.8, none, &tally);  // r'_0 > 2 r_w + D
  CHECK(tally.count == 1);
  double prev = 0;
  for (int k = 0; k <= 50; k += 5) {
    const double q = p_signal_wall_blocked(4.0, 0.2, table_params(k, 0.1));
    CHECK(q >= prev);
    prev = q;
  }
  Rng rng(1);
  const auto state = sample_signal_blockage({3, 3, 3, 3}, 0.2, 0.25, table_params(10, 0.1), rng);
  CHECK(state.direct() == 0.25);
  CHECK(state.reflected(Surface::kCeiling) == 1.0);
  CHECK(state.reflected(Surface::kFloor) == 1.0);
}

}  // TEST_SUITE
