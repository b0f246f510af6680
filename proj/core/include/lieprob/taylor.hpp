#pragma once

#include <cstddef>
#include <vector>

namespace lieprob {

/// Truncated power series a_0 + a_1 t + ... + a_K t^K.
///
/// Used as a scalar type for forward-mode automatic differentiation: a
/// generic functor written against `auto` arguments can be evaluated on
/// `Taylor` to obtain exact derivatives along a curve. The Lie series and the
/// analytic partials of vector fields and gradient fields are built on this.
class Taylor {
 public:
  Taylor() : c_(1, 0.0) {}
  /// Constant series of the given order. Implicit so that generic code can
  /// write `T{1.0}` for both double and Taylor.
  Taylor(double value, std::size_t order = 0) : c_(order + 1, 0.0) { c_[0] = value; }  // NOLINT
  explicit Taylor(std::vector<double> coefficients);

  /// The series value + t, truncated at `order`.
  static Taylor variable(double value, std::size_t order);

  [[nodiscard]] std::size_t order() const noexcept { return c_.size() - 1; }
  [[nodiscard]] double value() const noexcept { return c_[0]; }
  [[nodiscard]] double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }

  /// Series of d/dt, one order shorter (order 0 stays order 0).
  [[nodiscard]] Taylor derivative() const;
  /// Antiderivative with the given constant term, one order longer.
  [[nodiscard]] Taylor integral(double constant) const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);
  Taylor& operator+=(double s);
  Taylor& operator-=(double s);
  Taylor& operator*=(double s);
  Taylor& operator/=(double s);

 private:
  std::vector<double> c_;
};

Taylor operator-(Taylor a);
Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(Taylor a, double s);
Taylor operator+(double s, Taylor a);
Taylor operator-(Taylor a, double s);
Taylor operator-(double s, const Taylor& a);
Taylor operator*(Taylor a, double s);
Taylor operator*(double s, Taylor a);
Taylor operator/(Taylor a, double s);
Taylor operator/(double s, const Taylor& a);

Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor atan(const Taylor& a);
Taylor pow(const Taylor& a, int n);
Taylor pow(const Taylor& a, double p);

}  // namespace lieprob
