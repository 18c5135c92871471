#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mup/admissibility.hpp"
#include "mup/embed.hpp"
#include "mup/lab.hpp"
#include "oracles.hpp"

using namespace mup;
namespace {

constexpr double pi = std::numbers::pi;

AdmissibilityBudget small_budget() {
  AdmissibilityBudget b;
  b.n_pairs = 5000;
  b.n_samples = 5000;
  return b;
}

Embedding identity_interval(const ManifoldGrid& g) {
  return custom_embedding(g, 1, [&](std::size_t i, std::span<double> out) { out[0] = g.node(i)[0]; }, false);
}

}  // namespace

TEST(Lipschitz, UnitCircleMatchesPairGridOracle) {
  const auto g = build_circle_grid(1024);
  const double expected = oracle::circle_distortion(1.0);
  EXPECT_NEAR(expected, pi / 2.0, 1e-6);
  const double l = estimate_lipschitz(g, canonical_circle(g), 20000, 1);
  EXPECT_NEAR(l / expected, 1.0, 0.01);
}

TEST(Lipschitz, RadiusTwoIsChordDominated) {
  const auto g = build_circle_grid(1024);
  const double expected = oracle::circle_distortion(2.0);
  EXPECT_NEAR(expected, 2.0, 1e-6);
  EXPECT_NEAR(estimate_lipschitz(g, canonical_circle(g, 2.0), 20000, 1) / expected, 1.0, 0.01);
}

TEST(Lipschitz, IdentityIntervalIsIsometry) {
  const auto g = build_interval_grid(201, -1.0, 1.0);
  EXPECT_NEAR(estimate_lipschitz(g, identity_interval(g), 5000, 3), 1.0, 1e-12);
}

TEST(Lipschitz, DeterministicAndMonotoneInSamples) {
  const auto g = build_circle_grid(512);
  const auto m = helix_circle(g, 0.7, 3.0);
  EXPECT_EQ(estimate_lipschitz(g, m, 3000, 9), estimate_lipschitz(g, m, 3000, 9));
  double prev = 1.0;
  for (std::size_t n : {0u, 10u, 100u, 1000u, 10000u}) {
    const double l = estimate_lipschitz(g, m, n, 9);
    EXPECT_GE(l, prev);
    EXPECT_GE(l, 1.0);
    prev = l;
  }
}

TEST(Curvature, UnitCircleMatchesTripleSearch) {
  const double expected = oracle::curvature_n2(oracle::circle_points(48, 1.0));
  EXPECT_NEAR(expected, 0.5, 1e-9);
  const auto g = build_circle_grid(1024);
  const double c = estimate_curvature_constant(g, canonical_circle(g), {2, 3, 5}, 5000, 1);
  EXPECT_NEAR(c, 0.5, 0.05);
}

TEST(Curvature, RadiusTwoHalvesTheConstant) {
  const double expected = oracle::curvature_n2(oracle::circle_points(48, 2.0));
  EXPECT_NEAR(expected, 0.25, 1e-9);
  const auto g = build_circle_grid(1024);
  const double c1 = estimate_curvature_constant(g, canonical_circle(g), {2}, 1, 1);
  const double c2 = estimate_curvature_constant(g, canonical_circle(g, 2.0), {2}, 1, 1);
  EXPECT_NEAR(c2, 0.25, 0.03);
  EXPECT_NEAR(c2 / c1, 0.5, 0.05);
}

TEST(Curvature, StraightSegmentIsFlat) {
  const auto g = build_interval_grid(201, -1.0, 1.0);
  const auto m = custom_embedding(g, 2, [&](std::size_t i, std::span<double> out) {
    out[0] = g.node(i)[0];
    out[1] = 0.0;
  });
  EXPECT_LT(estimate_curvature_constant(g, m, {2}, 1, 1), 1e-3);
}

TEST(Curvature, L1CircleFailsCondition) {
  const auto g = build_circle_grid(1024);
  EXPECT_LT(estimate_curvature_constant(g, lp_sphere(g, 1.0), {2, 3}, 2000, 1), 1e-2);
}

TEST(Curvature, AgreesWithBruteForceOnCoarseHelix) {
  // With at most 64 nodes the N=2 search is exhaustive over every node.
  const auto g = build_circle_grid(40);
  const auto m = helix_circle(g, 0.4, 2.0);
  std::vector<oracle::Point> pts;
  for (std::size_t i = 0; i < g.size(); ++i) pts.emplace_back(m.point(i).begin(), m.point(i).end());
  EXPECT_NEAR(estimate_curvature_constant(g, m, {2}, 1, 1), oracle::curvature_n2(pts), 1e-12);
}

TEST(Curvature, AllDegenerateThrows) {
  const auto g = build_circle_grid(16);
  const auto m = custom_embedding(g, 2, [](std::size_t, std::span<double> out) { out[0] = out[1] = 1.0; });
  try {
    estimate_curvature_constant(g, m, {2, 3}, 100, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_embedding);
  }
}

TEST(Curvature, BadArguments) {
  const auto g = build_circle_grid(16);
  const auto m = canonical_circle(g);
  EXPECT_THROW(estimate_curvature_constant(g, m, {}, 10, 1), Error);
  EXPECT_THROW(estimate_curvature_constant(g, m, {3}, 0, 1), Error);
}

TEST(Curvature, MonotoneInNestedSamples) {
  const auto g = build_circle_grid(512);
  const auto m = helix_circle(g, 0.5, 2.0);
  double prev = kInfinity;
  for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
    const double c = estimate_curvature_constant(g, m, {3, 5}, n, 4);
    EXPECT_LE(c, prev);
    prev = c;
  }
  // More configuration sizes: a superset of configurations.
  EXPECT_LE(estimate_curvature_constant(g, m, {2, 3, 5}, 1000, 4), estimate_curvature_constant(g, m, {3, 5}, 1000, 4));
}

TEST(Curvature, KthPowerDegeneratesOnlyNearOrigin) {
  // Restricted away from |x| < 0.3 the estimate stays positive; unrestricted it
  // shrinks with resolution because the origin flattens.
  std::vector<double> unrestricted;
  for (std::size_t n_r : {50u, 200u, 800u}) {
    const auto g = build_ball_grid(n_r, 1, 1);
    const auto m = kth_power_graph(g, 4);
    CurvatureOptions outside;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(g.node(i)[0]) >= 0.3) outside.candidates.push_back(i);
    outside.coarse_nodes = 64;
    const double c_out = estimate_curvature_constant(g, m, {2}, 1, 1, outside);
    EXPECT_GT(c_out, 0.05);
    CurvatureOptions near;
    near.coarse_nodes = 64;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(g.node(i)[0]) <= 4.0 / static_cast<double>(n_r) * 8.0) near.candidates.push_back(i);
    unrestricted.push_back(estimate_curvature_constant(g, m, {2}, 1, 1, near));
  }
  EXPECT_LT(unrestricted[1], unrestricted[0]);
  EXPECT_LT(unrestricted[2], unrestricted[1]);
  EXPECT_LT(unrestricted[2], 0.05);
}

TEST(Curvature, ScaledCircleTracksInverseL) {
  const auto g = build_circle_grid(2048);
  std::vector<double> Ls{4, 8, 16}, lh;
  for (double L : Ls) {
    const auto m = scaled_circle_example(g, L);
    const double c = estimate_curvature_constant(g, m, {2}, 1, 1);
    EXPECT_GE(c * L, 0.25);
    EXPECT_LE(c * L, 4.0);
    lh.push_back(estimate_lipschitz(g, m, 20000, 1));
  }
  EXPECT_NEAR(fit_loglog("l_hat", Ls, lh).slope, 1.0, 0.15);
}

TEST(Invariance, RotationLeavesConstantsUnchanged) {
  const auto g = build_circle_grid(512);
  const auto m = helix_circle(g, 0.5, 2.0);
  const double a = 0.7, b = -1.1;
  // Rotation about z by a, then about x by b.
  const std::vector<double> Q{std::cos(a),  -std::sin(a) * std::cos(b), std::sin(a) * std::sin(b),
                              std::sin(a),  std::cos(a) * std::cos(b),  -std::cos(a) * std::sin(b),
                              0.0,          std::sin(b),                std::cos(b)};
  const auto r = m.transformed(Q);
  const auto budget = small_budget();
  const auto x = check_admissible(g, m, budget), y = check_admissible(g, r, budget);
  EXPECT_NEAR(x.l_hat, y.l_hat, 1e-12);
  EXPECT_NEAR(x.c_hat, y.c_hat, 1e-12);
}

TEST(Invariance, ScalingCovariance) {
  const auto g = build_circle_grid(512);
  const auto m = helix_circle(g, 0.5, 2.0);
  const auto budget = small_budget();
  const auto x = check_admissible(g, m, budget);
  const auto y = check_admissible(g, m.scaled(3.0), budget);
  EXPECT_NEAR(y.c_hat * 3.0, x.c_hat, 1e-12);
}

TEST(Invariance, SupNormBoundedByDiameterTimesL) {
  const auto c = build_circle_grid(256);
  const auto s = build_sphere2_grid(32, 32);
  const auto b = build_ball_grid(200, 1, 1);
  const std::vector<std::pair<const ManifoldGrid*, Embedding>> cases{
      {&c, canonical_circle(c)},  {&c, helix_circle(c, 0.5, 2.0)}, {&c, lp_sphere(c, 3.0)},
      {&c, scaled_circle_example(c, 8.0)}, {&s, canonical_sphere(s)}, {&b, paraboloid_graph(b)}};
  for (const auto& [g, m] : cases) {
    const double l = estimate_lipschitz(*g, m, 5000, 2);
    EXPECT_LE(max_radius(m), g->diameter() * l * 1.01) << to_string(m.descriptor().kind);
  }
}

TEST(Admissibility, ReportBundlesEstimates) {
  const auto g = build_circle_grid(512);
  const auto r = check_admissible(g, canonical_circle(g), small_budget());
  EXPECT_TRUE(r.n2_exhaustive);
  EXPECT_NEAR(r.l_hat, pi / 2, 1e-3);
  EXPECT_NEAR(r.c_hat, 0.5, 1e-6);
  EXPECT_LE(r.centering_residual, 1e-12);
  EXPECT_EQ(r.samples_used.size(), 5u);
  EXPECT_NEAR(r.ref_bound(), 0.5 / std::pow(pi / 2, 4), 1e-3);
}

TEST(Sufficiency, CircleRatioNearOne) {
  const auto g = build_circle_grid(1024);
  const auto s = test_n2_sufficiency(g, canonical_circle(g), small_budget());
  EXPECT_GE(s.ratio, 0.9);
  EXPECT_LE(s.ratio, 1.6);
  EXPECT_FALSE(s.violation);
}

TEST(Sufficiency, HelixReportsRatio) {
  const auto g = build_circle_grid(512);
  const auto s = test_n2_sufficiency(g, helix_circle(g, 0.5, 2.0), small_budget());
  EXPECT_GT(s.ratio, 0.0);
  EXPECT_EQ(s.violation, s.ratio > 2.0);
}

TEST(Sufficiency, ScaledCircleConstant) {
  const auto g = build_circle_grid(1024);
  const auto r = check_admissible(g, scaled_circle_example(g, 8.0), small_budget());
  EXPECT_GE(r.c_hat * 8.0, 0.25);
  EXPECT_LE(r.c_hat * 8.0, 4.0);
}
