#ifndef PQNORM_SERIES_HPP
#define PQNORM_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pqnorm/errors.hpp"

namespace pqnorm {

template <typename Scalar>
struct SeriesEval {
  Scalar value;
  Scalar tail;   // +inf when the fitted ratio does not give decay
  bool bounded;
};

// Power series sum_{k=0}^{K} c_k x^k. With the odd flag set, even-degree
// coefficients are held at exactly zero.
template <typename Scalar>
class TruncatedSeries {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TruncatedSeries() : TruncatedSeries(0) {}

  explicit TruncatedSeries(int order, bool odd = false)
      : coeffs_(Coeffs::Zero(checked_length(order))), odd_(odd) {}

  explicit TruncatedSeries(Coeffs c, bool odd = false) : coeffs_(std::move(c)), odd_(odd) {
    if (coeffs_.size() < 1) throw DomainError("series needs at least one coefficient");
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
      using std::isfinite;
      if (!isfinite(coeffs_[k])) throw DomainError("series coefficient is not finite");
      if (odd_ && k % 2 == 0) coeffs_[k] = Scalar(0);
    }
  }

  static TruncatedSeries identity(int order) {
    TruncatedSeries s(order, true);
    if (order >= 1) s.coeffs_[1] = Scalar(1);
    return s;
  }

  static TruncatedSeries constant(int order, Scalar c) {
    TruncatedSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_odd() const { return odd_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Scalar operator[](int k) const { return coeffs_[k]; }

  void set(int k, Scalar v) {
    using std::isfinite;
    if (k < 0 || k > order()) throw DomainError("series index out of range");
    if (!isfinite(v)) throw DomainError("series coefficient is not finite");
    if (odd_ && k % 2 == 0 && v != Scalar(0))
      throw DomainError("even coefficient of an odd series must be zero");
    coeffs_[k] = v;
  }

  // Horner evaluation of the retained terms; T may be complex.
  template <typename T>
  T horner(const T& x) const {
    T r = T(coeffs_[order()]);
    for (int k = order() - 1; k >= 0; --k) r = r * x + T(coeffs_[k]);
    return r;
  }

  TruncatedSeries truncated(int order) const {
    TruncatedSeries s(order, odd_);
    const int n = std::min(order, this->order());
    s.coeffs_.head(n + 1) = coeffs_.head(n + 1);
    return s;
  }

  template <typename NewScalar>
  TruncatedSeries<NewScalar> cast() const {
    typename TruncatedSeries<NewScalar>::Coeffs c(coeffs_.size());
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) c[k] = static_cast<NewScalar>(coeffs_[k]);
    return TruncatedSeries<NewScalar>(std::move(c), odd_);
  }

 private:
  static Eigen::Index checked_length(int order) {
    if (order < 0) throw DomainError("series order must be nonnegative");
    return order + 1;
  }

  Coeffs coeffs_;
  bool odd_;
};

using Series = TruncatedSeries<double>;

namespace detail {

// Cauchy product of coefficient vectors truncated at degree n, skipping zeros.
template <typename Vec>
Vec cauchy(const Vec& x, const Vec& y, Eigen::Index n) {
  using Scalar = typename Vec::Scalar;
  Vec r = Vec::Zero(n + 1);
  for (Eigen::Index i = 0; i <= n && i < x.size(); ++i) {
    if (x[i] == Scalar(0)) continue;
    const Eigen::Index jmax = std::min<Eigen::Index>(n - i, y.size() - 1);
    for (Eigen::Index j = 0; j <= jmax; ++j) {
      if (y[j] == Scalar(0)) continue;
      r[i + j] += x[i] * y[j];
    }
  }
  return r;
}

}  // namespace detail

template <typename Scalar>
TruncatedSeries<Scalar> multiply(const TruncatedSeries<Scalar>& s1, const TruncatedSeries<Scalar>& s2) {
  const int K = std::min(s1.order(), s2.order());
  return TruncatedSeries<Scalar>(detail::cauchy(s1.coeffs(), s2.coeffs(), K));
}

// outer(inner(x)), truncated at the smaller order.
template <typename Scalar>
TruncatedSeries<Scalar> compose(const TruncatedSeries<Scalar>& outer, const TruncatedSeries<Scalar>& inner) {
  if (inner[0] != Scalar(0)) throw DomainError("compose: inner series must vanish at 0");
  using Coeffs = typename TruncatedSeries<Scalar>::Coeffs;
  const int K = std::min(outer.order(), inner.order());
  Coeffs r = Coeffs::Zero(K + 1);
  r[0] = outer[outer.order() <= K ? outer.order() : K];
  for (int k = std::min(outer.order(), K) - 1; k >= 0; --k) {
    r = detail::cauchy(r, inner.coeffs(), K);
    r[0] += outer[k];
  }
  return TruncatedSeries<Scalar>(std::move(r), outer.is_odd() && inner.is_odd());
}

// Functional inverse by Lagrange inversion: g_n = (1/n) [x^{n-1}] (x/s(x))^n.
template <typename Scalar>
TruncatedSeries<Scalar> revert(const TruncatedSeries<Scalar>& s) {
  using Coeffs = typename TruncatedSeries<Scalar>::Coeffs;
  const int K = s.order();
  if (K < 1) throw DomainError("revert: order must be at least 1");
  if (s[0] != Scalar(0)) throw DomainError("revert: constant coefficient must be zero");
  if (s[1] == Scalar(0)) throw DomainError("revert: linear coefficient must be nonzero");

  // h = x / s(x) = 1 / (s_1 + s_2 x + ...), to degree K-1.
  Coeffs d = s.coeffs().tail(K);
  Coeffs h = Coeffs::Zero(K);
  h[0] = Scalar(1) / d[0];
  for (int n = 1; n < K; ++n) {
    Scalar acc(0);
    for (int j = 1; j <= n; ++j)
      if (d[j] != Scalar(0)) acc += d[j] * h[n - j];
    h[n] = -acc / d[0];
  }

  TruncatedSeries<Scalar> g(K, s.is_odd());
  Coeffs power = h;
  g.set(1, power[0]);
  for (int n = 2; n <= K; ++n) {
    power = detail::cauchy(power, h, K - 1);
    if (s.is_odd() && n % 2 == 0) continue;
    g.set(n, power[n - 1] / Scalar(n));
  }
  return g;
}

template <typename Scalar>
TruncatedSeries<Scalar> abs_map(const TruncatedSeries<Scalar>& s) {
  using std::abs;
  typename TruncatedSeries<Scalar>::Coeffs c = s.coeffs();
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = abs(c[k]);
  return TruncatedSeries<Scalar>(std::move(c), s.is_odd());
}

// Value of sum_{k >= first} c_k x^k over the retained terms plus a geometric
// tail estimate. Coefficients at or below 64 eps max|c| (over the whole
// series) are treated as rounding noise; the decay rate per degree is the
// largest ratio among the last ten significant coefficients.
template <typename Scalar>
SeriesEval<Scalar> eval(const TruncatedSeries<Scalar>& s, Scalar x, int first = 0) {
  using std::abs;
  using std::pow;
  const int K = s.order();
  first = std::clamp(first, 0, K + 1);
  const Scalar ax = abs(x);

  Scalar value(0);
  for (int k = K; k >= first; --k) value = value * x + s[k];
  if (first > 0) value *= pow(x, first);
  SeriesEval<Scalar> out{value, Scalar(0), true};

  Scalar cmax(0);
  for (int k = 0; k <= K; ++k) cmax = std::max<Scalar>(cmax, abs(s[k]));
  if (cmax == Scalar(0)) return out;
  const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * cmax;

  std::vector<int> sig;
  for (int k = K; k >= 0 && sig.size() < 10; --k)
    if (abs(s[k]) > floor) sig.push_back(k);
  const int last = sig.front();

  Scalar rate(0);
  for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
    const int hi = sig[i], lo = sig[i + 1];
    if (lo == 0) continue;
    const Scalar r = pow(abs(s[hi]) / abs(s[lo]), Scalar(1) / Scalar(hi - lo));
    rate = std::max(rate, r);
  }

  if (sig.size() >= 2 && rate > Scalar(0)) {
    const Scalar rx = rate * ax;
    if (rx >= Scalar(1)) {
      out.tail = std::numeric_limits<Scalar>::infinity();
      out.bounded = false;
      return out;
    }
    const Scalar q = s.is_odd() ? rx * rx : rx;
    out.tail += abs(s[last]) * pow(ax, Scalar(last)) * q / (Scalar(1) - q);
  }

  const int from = std::max(last + 1, first);
  bool noise = false;
  for (int k = from; k <= K; ++k) noise = noise || s[k] != Scalar(0);
  if (!noise) return out;
  if (ax < Scalar(1))
    out.tail += floor * pow(ax, Scalar(from)) / (Scalar(1) - ax);
  else
    out.tail += floor * Scalar(K - from + 1) * pow(ax, Scalar(K));
  return out;
}

}  // namespace pqnorm

#endif  // PQNORM_SERIES_HPP
