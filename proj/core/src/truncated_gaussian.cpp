#include "lieprob/truncated_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <boost/math/special_functions/erf.hpp>

#include "lieprob/errors.hpp"

namespace lieprob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;

double upper_tail(double a) { return 0.5 * std::erfc(a / kSqrt2); }
double upper_tail_inverse(double q) { return kSqrt2 * boost::math::erfc_inv(2.0 * q); }

// N(0, 1) on [a, b] with 0 <= a. Inverse-CDF on the upper tail keeps full
// relative precision until erfc underflows; beyond that the exponential
// proposal of Robert (1995) is used.
double sample_upper(Rng& rng, double a, double b) {
  if (a < 30.0) {
    const double qa = upper_tail(a);
    const double qb = std::isinf(b) ? 0.0 : upper_tail(b);
    if (qa - qb > 0.0) {
      const double q = qa - rng.uniform_open() * (qa - qb);
      return std::clamp(upper_tail_inverse(q), a, b);
    }
  }
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform_open()) / rate;
    if (z > b) continue;
    if (rng.uniform() <= std::exp(-0.5 * (z - rate) * (z - rate))) return z;
  }
}

void check_covariance(const Eigen::MatrixXd& cov, Eigen::Index k) {
  if (cov.rows() != k || cov.cols() != k) throw ArgumentError("covariance shape does not match mean");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("covariance is not symmetric");
  }
}


// Hildreth's dual coordinate ascent: Euclidean projection of 0 onto
// {R z >= target} for unit-norm rows R. Returns false if it does not reach
// the target within `sweeps` passes.
bool hildreth(const Eigen::MatrixXd& R, const Eigen::VectorXd& target, int sweeps, Eigen::VectorXd& z,
              Eigen::Index& worst, double& violation) {
  const Eigen::Index m = R.rows();
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  z = Eigen::VectorXd::Zero(R.cols());
  violation = kInf;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double step = std::max(-lambda[i], target[i] - R.row(i).dot(z));
      if (step != 0.0) {
        lambda[i] += step;
        z.noalias() += step * R.row(i).transpose();
      }
    }
    if (sweep % 10 == 9) {
      const Eigen::VectorXd slack = R * z - target;
      const double lowest = slack.minCoeff(&worst);
      violation = -lowest;
      if ((slack.array() >= -1e-12 * target.array().abs().max(1.0)).all()) return true;
    }
  }
  return false;
}

}  // namespace

double sample_truncated_standard_normal(Rng& rng, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw NumericalError("NaN truncation bound");
  if (lo > hi) {
    if (lo - hi <= 1e-9 * std::max(1.0, std::abs(lo))) return 0.5 * (lo + hi);
    throw NumericalError("empty truncation interval");
  }
  if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
    return 0.5 * (lo + hi);
  }
  if (lo >= 0.0) return sample_upper(rng, lo, hi);
  if (hi <= 0.0) return -sample_upper(rng, -hi, -lo);
  // Interval straddles zero: invert the CDF directly.
  const double plo = std::isinf(lo) ? 0.0 : 0.5 * std::erfc(-lo / kSqrt2);
  const double phi = std::isinf(hi) ? 1.0 : 0.5 * std::erfc(-hi / kSqrt2);
  const double p = plo + rng.uniform_open() * (phi - plo);
  const double x = -kSqrt2 * boost::math::erfc_inv(2.0 * p);
  return std::clamp(x, lo, hi);
}

TruncatedGaussianSampler::TruncatedGaussianSampler(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                                   const std::vector<LinearConstraint>& equalities,
                                                   const std::vector<LinearConstraint>& inequalities) {
  const Eigen::Index k = mean.size();
  if (k == 0) throw ArgumentError("empty Gaussian");
  check_covariance(cov, k);

  // cov = L L^T from the eigendecomposition; tiny negative eigenvalues are
  // rounding, anything larger means the covariance is unusable.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmax = std::max(lambda.maxCoeff(), 0.0);
  if (lambda.minCoeff() < -1e-10 * std::max(1.0, lmax)) {
    std::ostringstream os;
    os << "covariance not positive semidefinite (min eigenvalue " << lambda.minCoeff() << ")";
    throw NumericalError(os.str());
  }
  const Eigen::MatrixXd L = eig.eigenvectors() * lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Eigen::VectorXd u_particular = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd E(static_cast<Eigen::Index>(equalities.size()), k);
  Eigen::VectorXd d(static_cast<Eigen::Index>(equalities.size()));
  for (std::size_t i = 0; i < equalities.size(); ++i) {
    if (equalities[i].row.size() != k) throw ArgumentError("equality row has the wrong length");
    E.row(static_cast<Eigen::Index>(i)) = equalities[i].row.transpose();
    d[static_cast<Eigen::Index>(i)] = equalities[i].rhs;
  }

  if (!equalities.empty()) {
    const Eigen::MatrixXd A = E * L;
    const Eigen::VectorXd b = d - E * mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-12 * std::max(smax, 1e-300)) ++rank;

    Eigen::VectorXd coeffs = svd.matrixU().leftCols(rank).transpose() * b;
    coeffs = coeffs.cwiseQuotient(sv.head(rank));
    u_particular = svd.matrixV().leftCols(rank) * coeffs;
    null_basis = svd.matrixV().rightCols(k - rank);

    const Eigen::VectorXd residual = A * u_particular - b;
    Eigen::Index worst = 0;
    const double res = residual.size() ? residual.cwiseAbs().maxCoeff(&worst) : 0.0;
    if (res > 1e-8 * (1.0 + b.cwiseAbs().maxCoeff())) {
      throw InfeasibleError("equality constraints are inconsistent: " +
                            equalities[static_cast<std::size_t>(worst)].label);
    }
  }

  center_ = mean + L * u_particular;
  basis_ = L * null_basis;

  // Pull the center exactly onto {E x = d}; the correction is at rounding level.
  if (!equalities.empty()) {
    const Eigen::VectorXd miss = E * center_ - d;
    center_ -= E.completeOrthogonalDecomposition().solve(miss);
  }

  // Inequalities in free coordinates. Rows that vanish are fixed by the
  // equalities and only need a feasibility check.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<std::string> labels;
  const double basis_scale = std::max(1.0, std::sqrt(lmax));
  for (const LinearConstraint& c : inequalities) {
    if (c.row.size() != k) throw ArgumentError("inequality row has the wrong length");
    Eigen::VectorXd row = basis_.transpose() * c.row;
    const double target = c.rhs - c.row.dot(center_);
    const double row_norm = row.norm();
    if (row_norm <= 1e-10 * c.row.norm() * basis_scale) {
      if (target > 1e-9 * (1.0 + std::abs(c.rhs))) {
        throw InfeasibleError("constraint violated on the equality subspace: " + c.label);
      }
      continue;
    }
    rows.push_back(row / row_norm);
    rhs.push_back(target / row_norm);
    labels.push_back(c.label);
  }
  C_.resize(static_cast<Eigen::Index>(rows.size()), basis_.cols());
  t_.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    C_.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    t_[static_cast<Eigen::Index>(i)] = rhs[i];
  }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(inequalities.size()), k);
  Eigen::VectorXd b(static_cast<Eigen::Index>(inequalities.size()));
  for (std::size_t i = 0; i < inequalities.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = inequalities[i].row.transpose();
    b[static_cast<Eigen::Index>(i)] = inequalities[i].rhs;
  }
  find_feasible_start(labels, A, b, eig.eigenvectors(), lambda.cwiseMax(0.0));
}

void TruncatedGaussianSampler::find_feasible_start(const std::vector<std::string>& labels,
                                                   const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                                   const Eigen::MatrixXd& V, const Eigen::VectorXd& lambda) {
  const Eigen::Index q = basis_.cols();
  start_ = Eigen::VectorXd::Zero(q);
  if (C_.rows() == 0 || t_.maxCoeff() <= 0.0) return;

  // Projection of the conditional mean onto {C w >= t + margin}. A positive
  // margin keeps the chain off the boundary; it is dropped if the polytope is
  // too thin.
  const auto accept = [&](const Eigen::VectorXd& w, double margin) {
    const Eigen::ArrayXd slack = (C_ * w - t_).array();
    if (margin > 0.0) return (slack >= 0.5 * margin).all();
    return (slack >= -1e-12 * t_.array().abs().max(1.0)).all();
  };
  Eigen::VectorXd w;
  Eigen::Index worst_row = 0;
  double violation = kInf;
  for (const double margin : {1e-3, 1e-6, 0.0}) {
    if (hildreth(C_, t_.array() + margin, 2000, w, worst_row, violation) && accept(w, margin)) {
      start_ = w;
      return;
    }
  }

  // With a nearly singular covariance the whitened rows are badly scaled and
  // the projection above can stall. Project in the original coordinates
  // instead, over an orthonormal basis N of the equality subspace through the
  // center, and map the point back through the pseudo-inverse of basis_.
  const Eigen::MatrixXd N = basis_.householderQr().householderQ() * Eigen::MatrixXd::Identity(basis_.rows(), q);
  Eigen::MatrixXd R = A * N;
  Eigen::VectorXd target = b - A * center_;
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    const double norm = R.row(i).norm();
    if (norm <= 1e-14) {
      R.row(i).setZero();
      target[i] = std::min(target[i], 0.0);
      continue;
    }
    R.row(i) /= norm;
    target[i] /= norm;
  }
  const double lmax = std::max(lambda.maxCoeff(), 1e-300);
  const Eigen::VectorXd inv_sqrt =
      lambda.unaryExpr([lmax](double l) { return l > 1e-16 * lmax ? 1.0 / std::sqrt(l) : 0.0; });
  // basis_ = L P with L = V diag(sqrt(lambda)), so P = L^+ basis_ and
  // w = P^T L^+ (x - center).
  const Eigen::MatrixXd P = inv_sqrt.asDiagonal() * (V.transpose() * basis_);
  for (const double margin : {1e-6, 1e-9, 0.0}) {
    Eigen::VectorXd z;
    Eigen::Index row = 0;
    double miss = kInf;
    if (!hildreth(R, target.array() + margin, 20000, z, row, miss)) continue;
    const Eigen::VectorXd candidate = P.transpose() * (inv_sqrt.asDiagonal() * (V.transpose() * (N * z)));
    if (accept(candidate, 0.0)) {
      start_ = candidate;
      return;
    }
  }
  std::ostringstream os;
  os << "constraints are infeasible; most violated: " << labels[static_cast<std::size_t>(worst_row)]
     << " (violation " << violation << ")";
  throw InfeasibleError(os.str());
}

std::vector<Eigen::VectorXd> TruncatedGaussianSampler::sample(std::size_t n_samples, std::size_t burn_in,
                                                              std::size_t thin, std::uint64_t seed) const {
  Rng rng(seed);
  const Eigen::Index q = basis_.cols();
  const Eigen::Index m = C_.rows();
  const std::size_t stride = std::max<std::size_t>(thin, 1);
  Eigen::VectorXd w = start_;
  std::vector<Eigen::VectorXd> out;
  out.reserve(n_samples);

  const std::size_t sweeps = burn_in + n_samples * stride;
  for (std::size_t sweep = 0; sweep < sweeps && out.size() < n_samples; ++sweep) {
    Eigen::VectorXd slack = C_ * w - t_;
    for (Eigen::Index i = 0; i < q; ++i) {
      double lo = -kInf;
      double hi = kInf;
      const auto col = C_.col(i);
      for (Eigen::Index j = 0; j < m; ++j) {
        const double c = col[j];
        if (c == 0.0) continue;
        const double room = std::max(slack[j], 0.0) / c;
        if (c > 0.0) {
          lo = std::max(lo, w[i] - room);
        } else {
          hi = std::min(hi, w[i] - room);
        }
      }
      const double next = sample_truncated_standard_normal(rng, lo, hi);
      const double delta = next - w[i];
      if (delta != 0.0) {
        slack.noalias() += delta * col;
        w[i] = next;
      }
    }
    if (sweep >= burn_in && (sweep - burn_in) % stride == stride - 1) out.push_back(map(w));
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_truncated_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                                       const std::vector<LinearConstraint>& equalities,
                                                       const std::vector<LinearConstraint>& inequalities,
                                                       std::size_t n_samples, std::size_t burn_in,
                                                       std::size_t thin, std::uint64_t seed) {
  const TruncatedGaussianSampler sampler(mean, cov, equalities, inequalities);
  return sampler.sample(n_samples, burn_in, thin, seed);
}

double min_inequality_slack(const Eigen::VectorXd& x, const std::vector<LinearConstraint>& inequalities) {
  double lowest = kInf;
  for (const LinearConstraint& c : inequalities) lowest = std::min(lowest, c.row.dot(x) - c.rhs);
  return lowest;
}

double max_equality_residual(const Eigen::VectorXd& x, const std::vector<LinearConstraint>& equalities) {
  double worst = 0.0;
  for (const LinearConstraint& c : equalities) worst = std::max(worst, std::abs(c.row.dot(x) - c.rhs));
  return worst;
}

}  // namespace lieprob
