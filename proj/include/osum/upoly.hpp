#pragma once

// Dense univariate polynomials over an arbitrary exact field K, plus the
// small linear-algebra helpers (determinants, interpolation) built on them.

#include <functional>
#include <vector>

#include "osum/errors.hpp"

namespace osum {

template <class K>
class UPoly {
 public:
  UPoly() = default;
  UPoly(K c) {
    if (!(c == K(0))) c_.push_back(std::move(c));
  }
  explicit UPoly(std::vector<K> c) : c_(std::move(c)) { trim(); }

  static UPoly var() { return UPoly(std::vector<K>{K(0), K(1)}); }
  static UPoly monomial(K c, int e) {
    std::vector<K> v(e + 1, K(0));
    v[e] = std::move(c);
    return UPoly(std::move(v));
  }

  int deg() const { return (int)c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  const K& lc() const { return c_.back(); }
  K coeff(int i) const { return i >= 0 && i < (int)c_.size() ? c_[i] : K(0); }
  const std::vector<K>& coeffs() const { return c_; }

  void set_coeff(int i, K v) {
    if ((int)c_.size() <= i) c_.resize(i + 1, K(0));
    c_[i] = std::move(v);
    trim();
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff((int)i) + b.coeff((int)i);
    return UPoly(std::move(r));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff((int)i) - b.coeff((int)i);
    return UPoly(std::move(r));
  }
  friend UPoly operator-(const UPoly& a) {
    std::vector<K> r = a.c_;
    for (auto& x : r) x = K(0) - x;
    return UPoly(std::move(r));
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return UPoly(std::move(r));
  }
  friend UPoly operator*(const UPoly& a, const K& s) {
    std::vector<K> r = a.c_;
    for (auto& x : r) x = x * s;
    return UPoly(std::move(r));
  }
  UPoly& operator+=(const UPoly& b) { return *this = *this + b; }
  UPoly& operator-=(const UPoly& b) { return *this = *this - b; }
  UPoly& operator*=(const UPoly& b) { return *this = *this * b; }
  friend bool operator==(const UPoly& a, const UPoly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  // division with remainder; requires invertible leading coefficient of b
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw EngineError(ErrKind::DivisionByZero, "univariate division by zero");
    UPoly q, r = a;
    K li = K(1) / b.lc();
    while (!r.is_zero() && r.deg() >= b.deg()) {
      K c = r.lc() * li;
      int d = r.deg() - b.deg();
      UPoly m = monomial(c, d);
      q += m;
      r -= m * b;
    }
    return {q, r};
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    return *this * (K(1) / lc());
  }

  UPoly derivative() const {
    if (c_.size() <= 1) return UPoly();
    std::vector<K> r(c_.size() - 1, K(0));
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * K((long)i);
    return UPoly(std::move(r));
  }

  K eval(const K& x) const {
    K r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  // substitute another polynomial for the variable
  UPoly compose(const UPoly& g) const {
    UPoly r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * g + UPoly(*it);
    return r;
  }

  UPoly pow(int n) const {
    UPoly r(K(1)), b = *this;
    while (n) {
      if (n & 1) r *= b;
      n >>= 1;
      if (n) b *= b;
    }
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
  }
  std::vector<K> c_;
};

template <class K>
UPoly<K> gcd_upoly(UPoly<K> a, UPoly<K> b) {
  while (!b.is_zero()) {
    auto [q, r] = UPoly<K>::divmod(a, b);
    a = b;
    b = r;
  }
  return a.monic();
}

template <class K>
UPoly<K> squarefree_upoly(const UPoly<K>& p) {
  if (p.deg() <= 1) return p.monic();
  UPoly<K> g = gcd_upoly(p, p.derivative());
  if (g.deg() == 0) return p.monic();
  return UPoly<K>::divmod(p, g).first.monic();
}

// determinant over a field by Gaussian elimination with division
template <class K>
K det_field(std::vector<std::vector<K>> m) {
  size_t n = m.size();
  K det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == K(0)) ++piv;
    if (piv == n) return K(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = K(0) - det;
    }
    det = det * m[col][col];
    K inv = K(1) / m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == K(0)) continue;
      K f = m[r][col] * inv;
      for (size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
    }
  }
  return det;
}

// Lagrange interpolation through (xs[i], ys[i]) with distinct xs
template <class K>
UPoly<K> interpolate(const std::vector<K>& xs, const std::vector<K>& ys) {
  UPoly<K> r;
  for (size_t i = 0; i < xs.size(); ++i) {
    UPoly<K> li(K(1));
    K denom(1);
    for (size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      li *= UPoly<K>(std::vector<K>{K(0) - xs[j], K(1)});
      denom = denom * (xs[i] - xs[j]);
    }
    r += li * (ys[i] / denom);
  }
  return r;
}

}  // namespace osum
