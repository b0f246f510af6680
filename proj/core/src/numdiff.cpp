#include "lieprob/numdiff.hpp"

#include <algorithm>
#include <cmath>

namespace lieprob {

double difference_step(double magnitude) { return 1e-6 * std::max(1.0, std::abs(magnitude)); }

double central_derivative(const std::function<double(double)>& g, double x) {
  const double h = difference_step(x);
  return (g(x + h) - g(x - h)) / (2.0 * h);
}

Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& point) {
  const double h = difference_step(point.norm());
  Eigen::VectorXd grad(point.size());
  Eigen::VectorXd probe = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    probe[i] = point[i] + h;
    const double up = f(probe);
    probe[i] = point[i] - h;
    const double down = f(probe);
    probe[i] = point[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

Eigen::MatrixXd central_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& point) {
  const double h = difference_step(point.norm());
  Eigen::VectorXd probe = point;
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    probe[j] = point[j] + h;
    const Eigen::VectorXd up = f(probe);
    probe[j] = point[j] - h;
    const Eigen::VectorXd down = f(probe);
    probe[j] = point[j];
    if (jac.size() == 0) jac.resize(up.size(), point.size());
    jac.col(j) = (up - down) / (2.0 * h);
  }
  return jac;
}

}  // namespace lieprob
