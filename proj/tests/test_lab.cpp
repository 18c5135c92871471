#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mup/lab.hpp"
#include "oracles.hpp"

using namespace mup;
namespace {

constexpr double pi = std::numbers::pi;

const Verdict& verdict(const ExperimentResult& r, const std::string& prefix) {
  for (const auto& v : r.verdicts)
    if (v.name.rfind(prefix, 0) == 0) return v;
  throw std::runtime_error("no verdict " + prefix);
}

}  // namespace

TEST(Slopes, ExactPowerLaw) {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.5));
  const auto f = fit_loglog("y", x, y);
  EXPECT_NEAR(f.slope, -2.5, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_THROW(fit_loglog("bad", {1.0}, {1.0}), Error);
  EXPECT_THROW(fit_loglog("bad", {1.0, 2.0}, {1.0, -1.0}), Error);
}

TEST(Scaling, SlopesAndBand) {
  ScalingOptions opt;
  opt.budget.n_samples = 2000;
  const auto r = scaling_experiment({4, 8, 16, 32}, opt);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(verdict(r, "slope_term_infdist").value, -3.0, 0.3);
  EXPECT_NEAR(verdict(r, "slope_term_invtau2").value, -2.0, 0.3);
  EXPECT_NEAR(verdict(r, "slope_U").value, -5.0, 0.3);
  EXPECT_LE(verdict(r, "ratio_band").value, 10.0);
  for (const auto& s : r.slopes) {
    if (s.name == "c_hat") EXPECT_NEAR(s.slope, -1.0, 0.3);
    if (s.name == "l_hat") EXPECT_NEAR(s.slope, 1.0, 0.15);
  }
  const auto chord = r.column("chord_ab");
  const auto L = r.column("L");
  for (std::size_t i = 0; i < L.size(); ++i) {
    EXPECT_GT(chord[i] * L[i], 0.5);
    EXPECT_LT(chord[i] * L[i], 2.0);
  }
}

TEST(Scaling, ConfidenceShrinksWithMorePoints) {
  ScalingOptions opt;
  opt.budget.n_samples = 500;
  opt.budget.n_list = {2, 3};
  const auto four = scaling_experiment({4, 8, 16, 32}, opt);
  const auto six = scaling_experiment({4, 6, 8, 12, 16, 32}, opt);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(four.slopes[k].points, 4u);
    EXPECT_EQ(six.slopes[k].points, 6u);
    EXPECT_LE(six.slopes[k].stderr_slope, four.slopes[k].stderr_slope + 1e-3) << four.slopes[k].name;
  }
}

TEST(Scaling, NeedsTwoValues) { EXPECT_THROW(scaling_experiment({4}), Error); }

TEST(Parabola, DistanceFloorAndEquality) {
  for (int j = 1; j <= 10; ++j) {
    const double h = 0.1 * j;
    const double d = parabola_distance(h);
    EXPECT_GE(d, std::sqrt(3.0) / 2.0 * h - 1e-12);
    EXPECT_NEAR(d, oracle::parabola_distance_dense(h), 1e-8);
  }
  EXPECT_NEAR(parabola_distance(1.0), std::sqrt(3.0) / 2.0, 1e-3);
  EXPECT_NEAR(parabola_distance(0.3), 0.3, 1e-12);
}

TEST(Euclidean, MatchesTruncatedMomentOracle) {
  const auto r = euclidean_reduction({0.05, 0.02, 0.01}, {0.0, 0.3});
  EXPECT_TRUE(r.passed());
  for (const auto& row : r.rows) {
    const double c = row[0], eps = row[1];
    const double v = oracle::truncated_second_moment((-1.0 - c) / eps, (1.0 - c) / eps);
    EXPECT_NEAR(row[5], v * v / 4.0, 1e-9);
    EXPECT_NEAR(row[4] / (v * v / 4.0), 1.0, 0.05);
    EXPECT_NEAR(row[2], eps * eps * v, 0.05 * eps * eps);
  }
  EXPECT_LE(verdict(r, "product_variation center=0.0").value, 0.2);
}

TEST(Euclidean, RejectsHeavyTruncation) {
  EXPECT_THROW(euclidean_reduction({0.5}, {0.0}), Error);
  EXPECT_THROW(euclidean_reduction({0.01}, {0.7}), Error);
}

TEST(Inverse, ReferenceFieldMatchesClosedForm) {
  const auto g = build_circle_grid(512);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 + std::cos(g.node(i)[0])) / std::sqrt(3.0 * pi);
  AdmissibilityBudget b;
  b.n_samples = 2000;
  const auto r = inverse_constructive(g, Field(v, true), b);
  EXPECT_NEAR(r.rhs / oracle::inverse_reference_rhs(), 1.0, 0.05);
  EXPECT_NEAR(r.rhs, 0.0209, 0.05 * 0.0209);
  EXPECT_NEAR(r.f4, 35.0 / (36.0 * pi), 1e-12);
  EXPECT_LE(r.third_identity, 1e-8);
  EXPECT_GE(r.lhs, 0.0);
  EXPECT_GE(r.tau_norm * r.tau_norm, r.pythagorean - 1e-12);
}

TEST(Inverse, ConstantFieldHasZeroRhs) {
  const auto g = build_circle_grid(256);
  AdmissibilityBudget b;
  b.n_samples = 500;
  const auto r = inverse_constructive(g, constant_field(g), b);
  EXPECT_NEAR(r.rhs, 0.0, 1e-10);
  EXPECT_NEAR(r.excess, 0.0, 1e-12);
}

TEST(Inverse, RandomFamilyRhsPositive) {
  const auto g = build_circle_grid(256);
  AdmissibilityBudget b;
  b.n_samples = 300;
  b.n_list = {2, 3};
  for (std::size_t j = 0; j < 5; ++j) {
    const auto r = inverse_constructive(g, random_trig_field(g, 3, 2, j), b);
    EXPECT_GT(r.rhs, 0.0);
    EXPECT_GE(r.lhs, 0.0);
    EXPECT_LE(r.third_identity, 1e-8);
  }
}

TEST(Degenerate, KFourContrast) {
  const auto r = degenerate_k_experiment({2, 4}, {0.2, 0.1, 0.05}, {0.0});
  EXPECT_TRUE(r.passed());
  EXPECT_LT(verdict(r, "modified_variation k=4").value, 0.3);
  EXPECT_GT(verdict(r, "unmodified_decay k=4").value, 0.6);
  EXPECT_LE(verdict(r, "paraboloid_agreement k=2").value, verdict(r, "paraboloid_agreement k=2").hi);
}

TEST(Degenerate, KThreeAtOriginPasses) {
  const auto r = degenerate_k_experiment({3}, {0.2, 0.1, 0.05}, {0.0});
  EXPECT_TRUE(r.passed());
}

TEST(Degenerate, OffCentreRecordsFactor) {
  const auto r = degenerate_k_experiment({3}, {0.2}, {0.5});
  EXPECT_EQ(r.summary.count("max_factor k=3 center=0.500000"), 1u);
  EXPECT_LE(r.summary.at("max_factor k=3 center=0.500000"), 3.0);
}

TEST(Degenerate, RejectsKBelowTwo) { EXPECT_THROW(degenerate_k_experiment({1}, {0.1}, {0.0}), Error); }

TEST(Sweep, VonMisesOnCircle) {
  SweepOptions opt;
  opt.budget.n_samples = 1000;
  SweepReports rep;
  const auto r = uncertainty_sweep({GridKind::circle, 256}, {EmbeddingKind::canonical_circle, {}},
                               {"von-mises", {1, 2, 4, 8, 16}, {}, 0, 0}, opt, &rep);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(rep.uncertainty.size(), 5u);
  EXPECT_EQ(rep.breitenberger.size(), 5u);
  for (const auto& u : rep.uncertainty) EXPECT_GE(u.U, 0.05);
  for (const auto& b : rep.breitenberger) EXPECT_GT(b.product, 0.25);
  EXPECT_EQ(r.rows.size(), 10u);
}

TEST(Sweep, ConstantFieldOnlyDegenerate) {
  SweepOptions opt;
  opt.budget.n_samples = 500;
  opt.refine = false;
  SweepReports rep;
  uncertainty_sweep({GridKind::circle, 128}, {EmbeddingKind::canonical_circle, {}}, {"constant", {}, {}, 0, 0}, opt,
                &rep);
  ASSERT_EQ(rep.uncertainty.size(), 1u);
  EXPECT_TRUE(rep.uncertainty[0].degenerate_tau);
}

TEST(Sweep, DisconnectedMixedFamily) {
  GridSpec spec{GridKind::disjoint_union};
  spec.parts = {{GridKind::circle, 128}, {GridKind::circle, 128}};
  SweepOptions opt;
  opt.budget.n_samples = 500;
  opt.budget.n_list = {2, 3};
  SweepReports rep;
  const auto r = disconnected_sweep(spec, {EmbeddingKind::component_circles, {{"cx0", -3}, {"cx1", 3}}},
                                    {"two-component", {0, 1, 2, 4, 8}, {{"alpha", 0.5}}, 0, 0}, opt, &rep);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(rep.disconnected.size(), 5u);
  EXPECT_TRUE(rep.disconnected[0].degenerate);
  EXPECT_NEAR(rep.disconnected[0].sigma, 4.0, 1e-12);
  for (std::size_t k = 1; k < 5; ++k) EXPECT_GT(rep.disconnected[k].U, 0.0);
}
