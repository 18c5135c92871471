#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mup/families.hpp"
#include "mup/ucp.hpp"

using namespace mup;

TEST(Families, VonMisesSmallKappaIsConstant) {
  const auto g = build_circle_grid(256);
  const auto a = von_mises_field(g, 1e-9);
  const auto b = constant_field(g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
}

TEST(Families, NarrowGaussianConcentrates) {
  const auto g = build_ball_grid(4000, 1, 1);
  const auto f = radial_gaussian_field(g, 1.0 / 30.0);
  std::size_t centre = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.node(i)[0]) < std::abs(g.node(centre)[0])) centre = i;
  EXPECT_GE(local_mass(g, f, centre, 0.1), 0.99);
}

TEST(Families, GaussianTruncationMass) {
  EXPECT_LT(gaussian_truncation_mass(0.05, 0.0), 1e-12);
  EXPECT_GT(gaussian_truncation_mass(0.5, 0.0), 0.01);
  EXPECT_GT(gaussian_truncation_mass(0.05, 0.5), gaussian_truncation_mass(0.05, 0.0));
}

TEST(Families, RandomTrigIsDeterministic) {
  const auto g = build_circle_grid(128);
  const auto a = random_trig_field(g, 8, 5, 3);
  const auto b = random_trig_field(g, 8, 5, 3);
  const auto c = random_trig_field(g, 8, 5, 4);
  const auto d = random_trig_field(g, 8, 6, 3);
  bool differ_index = false, differ_seed = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    differ_index |= a[i] != c[i];
    differ_seed |= a[i] != d[i];
  }
  EXPECT_TRUE(differ_index);
  EXPECT_TRUE(differ_seed);
}

TEST(Families, EveryMemberIsNormalized) {
  const auto circle = build_circle_grid(256);
  const auto sphere = build_sphere2_grid(32, 32);
  const auto ball = build_ball_grid(400, 1, 1);
  const auto two = disjoint_union({circle, circle});
  const std::vector<std::pair<const ManifoldGrid*, FamilySpec>> cases{
      {&circle, {"constant", {}, {}, 0, 0}},
      {&circle, {"von-mises", {0.5, 4.0}, {{"t0", 1.0}}, 0, 0}},
      {&circle, {"fourier-mix", {1.0, 0.5, 0.25}, {}, 0, 0}},
      {&circle, {"random-trig", {}, {{"degree", 5}}, 3, 4}},
      {&circle, {"arc-bump", {}, {{"lo", 1.0}, {"hi", 2.0}}, 0, 0}},
      {&sphere, {"spherical-fisher", {1.0, 8.0}, {}, 0, 0}},
      {&sphere, {"constant", {}, {}, 0, 0}},
      {&ball, {"radial-gaussian", {0.05, 0.1}, {{"cx", 0.2}}, 0, 0}},
      {&two, {"two-component", {0.0, 2.0}, {{"alpha", 0.3}}, 0, 0}},
  };
  for (const auto& [g, spec] : cases) {
    const auto members = make_family(*g, spec);
    EXPECT_FALSE(members.empty());
    for (const auto& m : members) {
      EXPECT_TRUE(m.field.normalized());
      EXPECT_NEAR(l2_mass(*g, m.field.values()), 1.0, 1e-12) << m.label;
    }
  }
}

TEST(Families, RandomTrigCount) {
  const auto g = build_circle_grid(64);
  EXPECT_EQ(make_family(g, {"random-trig", {}, {}, 1, 7}).size(), 7u);
}

TEST(Families, GridMismatchIsConfigurationError) {
  const auto circle = build_circle_grid(64);
  const auto sphere = build_sphere2_grid(16, 16);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_input;
  };
  EXPECT_EQ(code_of([&] { make_family(sphere, {"von-mises", {1.0}, {}, 0, 0}); }), ErrorCode::configuration);
  EXPECT_EQ(code_of([&] { make_family(circle, {"spherical-fisher", {1.0}, {}, 0, 0}); }), ErrorCode::configuration);
  EXPECT_EQ(code_of([&] { make_family(circle, {"two-component", {1.0}, {}, 0, 0}); }), ErrorCode::configuration);
  EXPECT_EQ(code_of([&] { make_family(circle, {"no-such-family", {}, {}, 0, 0}); }), ErrorCode::configuration);
}

TEST(Families, TwoComponentMasses) {
  const auto c = build_circle_grid(128);
  const auto u = disjoint_union({c, c});
  const auto f = two_component_field(u, 0.25, 3.0, 0.5);
  const auto w = u.weights();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) (u.component_ids()[i] == 0 ? m0 : m1) += w[i] * f[i] * f[i];
  EXPECT_NEAR(m0, 0.25, 1e-10);
  EXPECT_NEAR(m1, 0.75, 1e-10);
}
