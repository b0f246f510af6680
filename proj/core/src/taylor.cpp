#include "lieprob/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lieprob/errors.hpp"

namespace lieprob {

namespace {

// Binary operations between series of different orders truncate to the
// shorter one; constants promoted from double carry order 0 and are widened.
std::size_t common_order(const Taylor& a, const Taylor& b) {
  if (a.order() == 0) return b.order();
  if (b.order() == 0) return a.order();
  return std::min(a.order(), b.order());
}

Taylor widen(const Taylor& a, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  const std::size_t n = std::min(order, a.order());
  for (std::size_t k = 0; k <= n; ++k) c[k] = a[k];
  return Taylor(std::move(c));
}

void sin_cos(const Taylor& a, Taylor& s, Taylor& c) {
  const std::size_t n = a.order();
  s = Taylor(std::sin(a[0]), n);
  c = Taylor(std::cos(a[0]), n);
  for (std::size_t k = 1; k <= n; ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * a[j] * c[k - j];
      cc += static_cast<double>(j) * a[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = -cc / static_cast<double>(k);
  }
}

}  // namespace

Taylor::Taylor(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  if (c_.empty()) c_.push_back(0.0);
}

Taylor Taylor::variable(double value, std::size_t order) {
  Taylor t(value, order);
  if (order >= 1) t.c_[1] = 1.0;
  return t;
}

Taylor Taylor::derivative() const {
  if (order() == 0) return Taylor(0.0, 0);
  std::vector<double> d(order(), 0.0);
  for (std::size_t k = 1; k <= order(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Taylor(std::move(d));
}

Taylor Taylor::integral(double constant) const {
  std::vector<double> d(c_.size() + 1, 0.0);
  d[0] = constant;
  for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Taylor(std::move(d));
}

Taylor& Taylor::operator+=(const Taylor& o) {
  const std::size_t n = common_order(*this, o);
  if (n != order()) *this = widen(*this, n);
  for (std::size_t k = 0; k <= std::min(n, o.order()); ++k) c_[k] += o[k];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  const std::size_t n = common_order(*this, o);
  if (n != order()) *this = widen(*this, n);
  for (std::size_t k = 0; k <= std::min(n, o.order()); ++k) c_[k] -= o[k];
  return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) {
  *this = *this * o;
  return *this;
}

Taylor& Taylor::operator/=(const Taylor& o) {
  *this = *this / o;
  return *this;
}

Taylor& Taylor::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Taylor& Taylor::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Taylor& Taylor::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Taylor operator-(Taylor a) {
  a *= -1.0;
  return a;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

Taylor operator*(const Taylor& a, const Taylor& b) {
  const std::size_t n = common_order(a, b);
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t i = 0; i <= std::min(n, a.order()); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j <= std::min(n - i, b.order()); ++j) c[i + j] += a[i] * b[j];
  }
  return Taylor(std::move(c));
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  const std::size_t n = common_order(a, b);
  const Taylor num = widen(a, n);
  const Taylor den = widen(b, n);
  std::vector<double> c(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    double acc = num[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= den[i] * c[k - i];
    c[k] = acc / den[0];
  }
  return Taylor(std::move(c));
}

Taylor operator+(Taylor a, double s) { return a += s; }
Taylor operator+(double s, Taylor a) { return a += s; }
Taylor operator-(Taylor a, double s) { return a -= s; }
Taylor operator-(double s, const Taylor& a) { return (-a) += s; }
Taylor operator*(Taylor a, double s) { return a *= s; }
Taylor operator*(double s, Taylor a) { return a *= s; }
Taylor operator/(Taylor a, double s) { return a /= s; }
Taylor operator/(double s, const Taylor& a) { return Taylor(s, a.order()) / a; }

Taylor exp(const Taylor& a) {
  const std::size_t n = a.order();
  Taylor e(std::exp(a[0]), n);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

Taylor log(const Taylor& a) {
  const std::size_t n = a.order();
  Taylor l(std::log(a[0]), n);
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j < k; ++j) acc += static_cast<double>(j) * l[j] * a[k - j];
    l[k] = (a[k] - acc / static_cast<double>(k)) / a[0];
  }
  return l;
}

Taylor sqrt(const Taylor& a) {
  const std::size_t n = a.order();
  Taylor s(std::sqrt(a[0]), n);
  if (n > 0 && s[0] == 0.0) throw DomainError("sqrt series expanded at zero");
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2.0 * s[0]);
  }
  return s;
}

Taylor sin(const Taylor& a) {
  Taylor s;
  Taylor c;
  sin_cos(a, s, c);
  return s;
}

Taylor cos(const Taylor& a) {
  Taylor s;
  Taylor c;
  sin_cos(a, s, c);
  return c;
}

Taylor atan(const Taylor& a) {
  if (a.order() == 0) return Taylor(std::atan(a[0]), 0);
  // atan(a)' = a' / (1 + a^2)
  const Taylor q = 1.0 + a * a;
  const Taylor rate = a.derivative() / widen(q, a.order() - 1);
  return rate.integral(std::atan(a[0]));
}

Taylor pow(const Taylor& a, int n) {
  if (n < 0) return 1.0 / pow(a, -n);
  Taylor result(1.0, a.order());
  Taylor base = a;
  unsigned m = static_cast<unsigned>(n);
  while (m != 0) {
    if (m & 1U) result = result * base;
    m >>= 1U;
    if (m != 0) base = base * base;
  }
  return result;
}

Taylor pow(const Taylor& a, double p) { return exp(p * log(a)); }

}  // namespace lieprob
