#include <cmath>

#include <gtest/gtest.h>

#include "lieprob/constrained_prior.hpp"
#include "lieprob/errors.hpp"
#include "support.hpp"

namespace lieprob {
namespace {

using support::kE;
using support::reference_problem;

const KernelParams kKernel{1.0, 0.3 * 1.4};

TEST(BuildPrior, ThreeUniformKnots) {
  const ConstrainedPathModel m = build_prior(reference_problem(), 3, kKernel);
  ASSERT_EQ(m.size(), 3);
  EXPECT_DOUBLE_EQ(m.knots[0], 0.1);
  EXPECT_NEAR(m.knots[1], 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(m.knots[2], 1.5);
}

TEST(BuildPrior, StationaryDiagonal) {
  const ConstrainedPathModel m = build_prior(reference_problem(), 20, {2.5, 0.2}, 1e-10);
  for (Eigen::Index i = 0; i < m.size(); ++i) EXPECT_DOUBLE_EQ(m.coef_cov(i, i), 2.5 + 1e-10);
  EXPECT_LE((m.coef_cov - m.coef_cov.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.coef_mean, Eigen::VectorXd::Zero(20));
  EXPECT_DOUBLE_EQ(m.scale, 1.0);
}

TEST(BuildPrior, ConstraintSetsInstalled) {
  const ConstrainedPathModel m = build_prior(reference_problem(), 10, kKernel);
  ASSERT_EQ(m.equalities.size(), 1u);
  EXPECT_EQ(m.equalities[0].row, Eigen::VectorXd::Unit(10, 0));
  EXPECT_EQ(m.equalities[0].rhs, 0.0);
  // 9 monotone + 10 upper + 10 lower.
  EXPECT_EQ(m.inequalities.size(), 29u);
}

TEST(BuildPrior, Preconditions) {
  const QuadratureProblem q = reference_problem();
  EXPECT_THROW((void)build_prior(q, 2, kKernel), ArgumentError);
  EXPECT_THROW((void)build_prior(q, 10, {0.0, 0.3}), ArgumentError);
  EXPECT_THROW((void)build_prior(q, 10, {1.0, -0.3}), ArgumentError);
  EXPECT_THROW((void)build_prior(q, 10, kKernel, -1.0), ArgumentError);
}

TEST(SamplePrior, EveryDrawSatisfiesConstraints) {
  const ConstrainedPathModel m = build_prior(reference_problem(), 24, kKernel);
  const auto samples = sample_prior(m, {200, 500, 5}, 0);
  ASSERT_EQ(samples.size(), 200u);
  const CanonicalChart chart = homogeneous_chart(kE, 0.1);
  for (const PathSample& s : samples) {
    const Eigen::VectorXd& c = s.coefficients();
    EXPECT_EQ(c[0], 0.0);
    EXPECT_EQ(s.s(0.1), std::log(0.1));
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      EXPECT_GE(c[j], -1e-10);
      EXPECT_LE(c[j], 1.0 + 1e-10);
      if (j > 0) EXPECT_GE(c[j] - c[j - 1], -1e-10);
    }
    EXPECT_GE(min_inequality_slack(c, m.inequalities), kInequalitySlack);
    EXPECT_LE(max_equality_residual(c, m.equalities), kEqualityTolerance);
    EXPECT_TRUE(check_implicit_principle(s, chart).well_defined);
  }
}

TEST(SamplePrior, DeterministicInSeed) {
  const ConstrainedPathModel m = build_prior(reference_problem(), 12, kKernel);
  const auto a = sample_prior(m, {20, 50, 2}, 7);
  const auto b = sample_prior(m, {20, 50, 2}, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].coefficients(), b[i].coefficients());
}

TEST(PathSample, InterpolationAndSlope) {
  auto knots = std::make_shared<const Eigen::VectorXd>(Eigen::Vector3d(0.1, 0.8, 1.5));
  const PathSample p(knots, Eigen::Vector3d(0.0, 0.35, 0.7), 2.0);
  EXPECT_NEAR(p.zeta(0.45), 0.175, 1e-15);
  EXPECT_NEAR(p.s(0.45), std::log(0.45) + 0.35, 1e-15);
  EXPECT_NEAR(p.zeta_slope(1), 0.5, 1e-15);
  EXPECT_NEAR(p.slope(0.1), 1.0 / 0.1 + 2.0 * 0.5, 1e-12);
  EXPECT_THROW(PathSample(knots, Eigen::Vector2d(0, 1), 1.0), ArgumentError);
}

TEST(ImplicitPrinciple, ExactPathIsStrictlyIncreasing) {
  const CanonicalChart chart = homogeneous_chart(kE, 0.1);
  const auto s = [](double r) { return std::log(r) + support::reference_zeta(r); };
  const ImplicitPrincipleCheck c = check_implicit_principle(s, chart, {0.1, 1.4}, 500);
  EXPECT_TRUE(c.well_defined);
  EXPECT_EQ(c.ties, 0u);
  EXPECT_FALSE(c.degenerate);
}

TEST(ImplicitPrinciple, FlatZetaIsDegenerate) {
  const CanonicalChart chart = homogeneous_chart(kE, 0.1);
  auto knots = std::make_shared<const Eigen::VectorXd>(Eigen::VectorXd::LinSpaced(8, 0.1, 1.5));
  const PathSample flat(knots, Eigen::VectorXd::Zero(8), 1.0);
  const ImplicitPrincipleCheck c = check_implicit_principle(flat, chart);
  EXPECT_TRUE(c.well_defined);
  EXPECT_TRUE(c.degenerate);
  EXPECT_EQ(c.ties, 70u);
}

TEST(ImplicitPrinciple, DecreasingStepFails) {
  const CanonicalChart chart = homogeneous_chart(kE, 0.1);
  auto knots = std::make_shared<const Eigen::VectorXd>(Eigen::VectorXd::LinSpaced(8, 0.1, 1.5));
  Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(8, 0.0, 0.9);
  c[5] = c[3];
  const PathSample bad(knots, c, 1.0);
  EXPECT_FALSE(check_implicit_principle(bad, chart).well_defined);
}

TEST(Gram, SquaredExponential) {
  const Eigen::MatrixXd K = squared_exponential_gram(Eigen::Vector2d(0.0, 0.5), {2.0, 0.5});
  EXPECT_DOUBLE_EQ(K(0, 0), 2.0);
  EXPECT_NEAR(K(0, 1), 2.0 * std::exp(-0.5), 1e-15);
}

}  // namespace
}  // namespace lieprob
