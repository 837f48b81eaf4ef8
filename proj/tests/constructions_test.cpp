#include <gtest/gtest.h>

#include <cmath>

#include "dioph/approx.hpp"
#include "dioph/constructions.hpp"
#include "dioph/exponent.hpp"

using namespace dioph;

TEST(Constructions, GoldenLine) {
  Subspace g = golden_line();
  EXPECT_EQ(g.ambient_dim(), 2);
  EXPECT_EQ(g.dim(), 1);
  EXPECT_LT(max_principal_angle(g, algebraic_power_line(2)), 1e-15);
}

TEST(Constructions, PowerLineRootsSatisfyPolynomials) {
  for (int degree = 2; degree <= 6; ++degree) {
    const long double r = power_line_root(degree);
    const auto coeffs = power_line_polynomial(degree);
    long double p = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * r + *it;
    EXPECT_LT(std::fabs(p), 1e-14L) << degree;
    EXPECT_GT(r, 1.0L);
    Subspace line = algebraic_power_line(degree);
    EXPECT_EQ(line.ambient_dim(), degree);
    // Consecutive coordinates have ratio r.
    const Eigen::VectorXd v = line.basis().col(0);
    for (int i = 0; i + 1 < degree; ++i) EXPECT_NEAR(v[i + 1] / v[i], static_cast<double>(r), 1e-12);
  }
  EXPECT_THROW(algebraic_power_line(1), UnsupportedDegree);
  EXPECT_THROW(algebraic_power_line(7), UnsupportedDegree);
}

TEST(Constructions, RationalSubspaceContainsItsGenerators) {
  auto r = rational_subspace({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
  EXPECT_EQ(r.space.dim(), 3);
  auto table = record_table(r.space, 100);
  EXPECT_TRUE(table.contains_integer_points);
  EXPECT_EQ(table.records.front().value, 0.0);
  EXPECT_THROW(rational_subspace({{1, 2}, {2, 4}}), DimensionError);
  EXPECT_THROW(rational_subspace({{1, 2, 3}, {2, 4, 6}}), RankDeficient);
}

TEST(Constructions, SampleThetaIsDeterministic) {
  auto a = sample_theta(2, 3, 1.5, 42);
  auto b = sample_theta(2, 3, 1.5, 42);
  auto c = sample_theta(2, 3, 1.5, 43);
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_NE(a.entries(), c.entries());
  EXPECT_LE(a.max_abs_entry(), 1.5);
}

TEST(Constructions, MixerMatchesReferenceSequence) {
  // First outputs of the reference splitmix64 stream seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(Constructions, SampleThetaMeanIsCentered) {
  auto big = sample_theta(1, 100000, 2.0, 7);
  EXPECT_LT(std::fabs(big.entries().mean()), 0.02);
}

TEST(Constructions, ScenarioContainment) {
  for (auto kind : {SubjectKind::kAlgebraic, SubjectKind::kGoldenEmbedded, SubjectKind::kRational}) {
    auto s = build_scenario(4, 3, 1, 2, kind, 11);
    EXPECT_EQ(s.outer.dim(), 3);
    EXPECT_EQ(s.inner.dim(), 1);
    EXPECT_LE(distance_to_subspace(Eigen::VectorXd(s.inner.basis().col(0)), s.outer), kContainmentTolerance);
    auto again = build_scenario(4, 3, 1, 2, kind, 11);
    EXPECT_EQ(s.outer.basis(), again.outer.basis());
  }
  auto rational = build_scenario(4, 3, 1, 2, SubjectKind::kRational, 0);
  EXPECT_EQ(distance_to_subspace(IntVector{0, 0, 0, 1}, rational.outer), 1.0);
  auto equal = build_scenario(4, 2, 2, 1, SubjectKind::kRational, 0);
  EXPECT_LT(max_principal_angle(equal.inner, equal.outer), 1e-15);
}

TEST(Constructions, ScenarioRejectsBadDimensions) {
  EXPECT_THROW(build_scenario(4, 4, 1, 2, SubjectKind::kAlgebraic, 0), DimensionError);
  EXPECT_THROW(build_scenario(4, 3, 1, 3, SubjectKind::kAlgebraic, 0), DimensionError);
  EXPECT_THROW(build_scenario(4, 3, 2, 1, SubjectKind::kAlgebraic, 0), DimensionError);
}

TEST(Constructions, QuarticPowerLineExponent) {
  auto table = record_table(algebraic_power_line(4), 100000);
  auto est = estimate_exponent(table);
  ASSERT_TRUE(est.omega_hat);
  EXPECT_GE(*est.omega_hat, 0.25);
  EXPECT_LE(*est.omega_hat, 0.45);
}
