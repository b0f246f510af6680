#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "lieprob/errors.hpp"
#include "lieprob/truncated_gaussian.hpp"
#include "support.hpp"

namespace lieprob {
namespace {

using support::normal;

LinearConstraint ge(Eigen::Index dim, Eigen::Index i, double bound, double sign = 1.0) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
  row[i] = sign;
  return {row, sign * bound, (sign > 0 ? "lower" : "upper") + std::to_string(i)};
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST(TruncatedNormal1D, StaysInInterval) {
  Rng rng(5);
  for (const auto& [lo, hi] : std::vector<std::pair<double, double>>{
           {-1, 2}, {2, 3}, {-3, -2}, {40, INFINITY}, {-INFINITY, -40}, {8, 8.001}, {-INFINITY, INFINITY}}) {
    for (int i = 0; i < 200; ++i) {
      const double x = sample_truncated_standard_normal(rng, lo, hi);
      EXPECT_GE(x, lo);
      EXPECT_LE(x, hi);
    }
  }
}

TEST(TruncatedNormal1D, IntervalMeanMatchesClosedForm) {
  Rng rng(9);
  const double a = 2.0;
  const double b = 3.0;
  const double z = normal_cdf(b) - normal_cdf(a);
  const double mean = (normal_pdf(a) - normal_pdf(b)) / z;
  const double var = 1.0 + (a * normal_pdf(a) - b * normal_pdf(b)) / z - mean * mean;
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_truncated_standard_normal(rng, a, b);
  EXPECT_NEAR(sum / n, mean, 4.0 * std::sqrt(var / n));
}

TEST(TruncatedNormal1D, DeepTailMean) {
  // For large a the truncated mean is a + 1/a - 2/a^3 + O(a^-5).
  Rng rng(2);
  const double a = 50.0;
  double sum = 0.0;
  for (int i = 0; i < 5000; ++i) sum += sample_truncated_standard_normal(rng, a, INFINITY);
  EXPECT_NEAR(sum / 5000, a + 1.0 / a - 2.0 / (a * a * a), 1e-3);
}

TEST(TruncatedNormal1D, EmptyIntervalIsAnError) {
  Rng rng(0);
  EXPECT_THROW((void)sample_truncated_standard_normal(rng, 1.0, 0.0), NumericalError);
  EXPECT_THROW((void)sample_truncated_standard_normal(rng, NAN, 0.0), NumericalError);
}

TEST(Sampler, UnconstrainedMean) {
  const auto draws = sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), {}, {},
                                               2000, 100, 1, 0);
  ASSERT_EQ(draws.size(), 2000u);
  double mean = 0.0;
  for (const auto& d : draws) mean += d[0];
  EXPECT_NEAR(mean / 2000, 0.0, 0.05);
}

TEST(Sampler, HalfNormalMean) {
  const auto draws = sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), {},
                                               {ge(1, 0, 0.0)}, 2000, 100, 1, 0);
  double mean = 0.0;
  for (const auto& d : draws) {
    EXPECT_GE(d[0], 0.0);
    mean += d[0];
  }
  EXPECT_NEAR(mean / 2000, std::sqrt(2.0 / std::numbers::pi), 0.05);
}

TEST(Sampler, EqualityIsExact) {
  Eigen::VectorXd row(2);
  row << 1.0, -1.0;
  const auto draws = sample_truncated_gaussian(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2),
                                               {{row, 0.0, "x1 = x2"}}, {}, 500, 10, 1, 3);
  for (const auto& d : draws) EXPECT_LE(std::abs(d[0] - d[1]), 1e-10);
}

TEST(Sampler, DeterministicInSeed) {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.6, 0.6, 2.0;
  const std::vector<LinearConstraint> ineq{ge(2, 0, -0.5), ge(2, 1, 1.0, -1.0)};
  const auto a = sample_truncated_gaussian(Eigen::VectorXd::Zero(2), cov, {}, ineq, 50, 10, 2, 42);
  const auto b = sample_truncated_gaussian(Eigen::VectorXd::Zero(2), cov, {}, ineq, 50, 10, 2, 42);
  const auto c = sample_truncated_gaussian(Eigen::VectorXd::Zero(2), cov, {}, ineq, 50, 10, 2, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Sampler, InfeasibleNamesConstraint) {
  const std::vector<LinearConstraint> ineq{{Eigen::VectorXd::Ones(1), 1.0, "x >= 1"},
                                           {-Eigen::VectorXd::Ones(1), 0.0, "x <= 0"}};
  try {
    (void)sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), {}, ineq, 10, 0, 1, 0);
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleError& e) {
    const std::string what = e.what();
    EXPECT_TRUE(what.find("x >= 1") != std::string::npos || what.find("x <= 0") != std::string::npos) << what;
  }
}

TEST(Sampler, InconsistentEqualities) {
  const std::vector<LinearConstraint> eq{{Eigen::VectorXd::Ones(1), 1.0, "x = 1"},
                                         {Eigen::VectorXd::Ones(1), 2.0, "x = 2"}};
  EXPECT_THROW((void)sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), eq, {},
                                               10, 0, 1, 0),
               InfeasibleError);
}

TEST(Sampler, EqualityFixedRowViolated) {
  // x = 0 pins the coordinate; x >= 1 is then violated on the subspace.
  const std::vector<LinearConstraint> eq{{Eigen::VectorXd::Ones(1), 0.0, "pin"}};
  const std::vector<LinearConstraint> ineq{{Eigen::VectorXd::Ones(1), 1.0, "x >= 1"}};
  EXPECT_THROW((void)sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), eq, ineq,
                                               10, 0, 1, 0),
               InfeasibleError);
}

TEST(Sampler, NotPositiveSemidefinite) {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW((void)sample_truncated_gaussian(Eigen::VectorXd::Zero(2), cov, {}, {}, 10, 0, 1, 0), NumericalError);
}

TEST(Sampler, ThinNonOverlappingBoxAndSlab) {
  // Feasible set is a thin slab: the start must still be found.
  Eigen::VectorXd row(2);
  row << 1.0, 1.0;
  const std::vector<LinearConstraint> ineq{{row, 3.0, "sum >= 3"}, {-row, -3.0 - 1e-9, "sum <= 3 + 1e-9"}};
  const auto draws = sample_truncated_gaussian(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), {}, ineq,
                                               20, 5, 1, 0);
  for (const auto& d : draws) EXPECT_GE(min_inequality_slack(d, ineq), -1e-10);
}

// Moments of the Gibbs chain against plain rejection sampling from the
// untruncated Gaussian, in dimensions 1 to 3 with box constraints.
struct BoxCase {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

BoxCase box_case(int dim) {
  BoxCase c;
  c.mean = Eigen::VectorXd::LinSpaced(dim, 0.3, -0.4);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) a(i, j) = 0.5 / (1 + i + j);
  }
  c.cov = a * a.transpose();
  c.lo = Eigen::VectorXd::Constant(dim, -0.5);
  c.hi = Eigen::VectorXd::LinSpaced(dim, 1.0, 2.0);
  return c;
}

class BoxOracle : public ::testing::TestWithParam<int> {};

TEST_P(BoxOracle, GibbsMomentsMatchRejection) {
  const int dim = GetParam();
  const BoxCase c = box_case(dim);
  std::vector<LinearConstraint> ineq;
  for (int i = 0; i < dim; ++i) {
    ineq.push_back(ge(dim, i, c.lo[i]));
    ineq.push_back(ge(dim, i, c.hi[i], -1.0));
  }
  constexpr std::size_t kDraws = 5000;
  const auto gibbs = sample_truncated_gaussian(c.mean, c.cov, {}, ineq, kDraws, 500, 5, 17);

  const Eigen::MatrixXd L = c.cov.llt().matrixL();
  Rng rng(99);
  std::vector<Eigen::VectorXd> accepted;
  while (accepted.size() < kDraws) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z[i] = support::normal(rng);
    const Eigen::VectorXd x = c.mean + L * z;
    if ((x.array() >= c.lo.array()).all() && (x.array() <= c.hi.array()).all()) accepted.push_back(x);
  }

  const auto moments = [dim](const std::vector<Eigen::VectorXd>& xs) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(dim);
    for (const auto& x : xs) {
      m += x;
      m2 += x.cwiseProduct(x);
    }
    m /= static_cast<double>(xs.size());
    m2 /= static_cast<double>(xs.size());
    return std::pair{m, (m2 - m.cwiseProduct(m)).eval()};
  };
  const auto [gm, gv] = moments(gibbs);
  const auto [rm, rv] = moments(accepted);
  for (int i = 0; i < dim; ++i) {
    const double se = std::sqrt(gv[i] / kDraws + rv[i] / kDraws);
    EXPECT_LE(std::abs(gm[i] - rm[i]), 3.0 * se) << "mean, coordinate " << i;
    // Variance of the sample variance is about 2 var^2 / n for these near-Gaussian marginals.
    const double se_var = std::sqrt(2.0 * gv[i] * gv[i] / kDraws + 2.0 * rv[i] * rv[i] / kDraws);
    EXPECT_LE(std::abs(gv[i] - rv[i]), 3.0 * se_var) << "variance, coordinate " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, BoxOracle, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace lieprob
