#pragma once

#include <functional>

#include <Eigen/Core>

namespace lieprob {

/// Central-difference step used throughout: 1e-6 scaled by the point size.
[[nodiscard]] double difference_step(double magnitude);

[[nodiscard]] double central_derivative(const std::function<double(double)>& g, double x);

[[nodiscard]] Eigen::VectorXd central_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& point);

/// Columns are partials with respect to each coordinate of `point`.
[[nodiscard]] Eigen::MatrixXd central_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& point);

}  // namespace lieprob
