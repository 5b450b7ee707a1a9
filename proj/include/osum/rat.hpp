#pragma once

// Exact scalar arithmetic: rationals (GMP) and quadratic irrationals a + b*sqrt(D).

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace osum {

using Rat = mpq_class;
using Int = mpz_class;

inline int sgn(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }

// mpq_class(n, d) does not canonicalize; this does.
inline Rat frac(long n, long d) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

inline Rat rat_abs(const Rat& q) { return sgn(q) < 0 ? Rat(-q) : q; }

inline std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Exact integer square root test.
inline std::optional<Int> int_sqrt(const Int& n) {
  if (sgn(Rat(n)) < 0) return std::nullopt;
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r == n) return r;
  return std::nullopt;
}

inline std::optional<Rat> rat_sqrt(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  auto n = int_sqrt(q.get_num());
  auto d = int_sqrt(q.get_den());
  if (!n || !d) return std::nullopt;
  return Rat(*n, *d);
}

// Strips square factors: returns (s, r) with n = s * r^2, s squarefree-ish
// (trial division up to a bound; exact for the small radicands we meet).
inline std::pair<Int, Int> squarefree_decompose(Int n) {
  Int s = 1, r = 1;
  if (n < 0) { s = -1; n = -n; }
  for (Int p = 2; p * p <= n && p < 100000; ++p) {
    while (mpz_divisible_p(n.get_mpz_t(), Int(p * p).get_mpz_t())) {
      n /= p * p;
      r *= p;
    }
  }
  return {s * n, r};
}

// a + b*sqrt(D).  D == 0 encodes a plain rational (then b must be 0).
// D > 1 must be squarefree so that representation is canonical.
struct Quad {
  Rat a{0};
  Rat b{0};
  long D{0};

  Quad() = default;
  Quad(Rat a_) : a(std::move(a_)) {}
  Quad(long v) : a(v) {}
  Quad(int v) : a(v) {}
  Quad(Rat a_, Rat b_, long D_) : a(std::move(a_)), b(std::move(b_)), D(D_) {
    if (b == 0) D = 0;
    if (D == 0 && b != 0) throw std::logic_error("Quad: irrational part without radicand");
  }

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }

  friend Quad operator-(const Quad& x) { return Quad(-x.a, -x.b, x.D); }

  static long merge_D(const Quad& x, const Quad& y) {
    if (x.D == 0) return y.D;
    if (y.D == 0) return x.D;
    if (x.D != y.D) throw std::invalid_argument("Quad: mixed radicands");
    return x.D;
  }

  friend Quad operator+(const Quad& x, const Quad& y) {
    long D = merge_D(x, y);
    return Quad(x.a + y.a, x.b + y.b, D);
  }
  friend Quad operator-(const Quad& x, const Quad& y) { return x + (-y); }
  friend Quad operator*(const Quad& x, const Quad& y) {
    long D = merge_D(x, y);
    return Quad(x.a * y.a + x.b * y.b * D, x.a * y.b + x.b * y.a, D);
  }
  friend bool operator==(const Quad& x, const Quad& y) {
    return x.a == y.a && x.b == y.b && (x.b == 0 || x.D == y.D);
  }

  Quad inv() const {
    Rat n = a * a - b * b * D;
    if (n == 0) {
      if (a == 0 && b == 0) throw std::domain_error("Quad: division by zero");
      // a^2 = b^2 D with D squarefree forces a = b = 0, so unreachable.
      throw std::logic_error("Quad: degenerate norm");
    }
    return Quad(a / n, -b / n, D);
  }
  friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inv(); }

  // Exact sign of a + b*sqrt(D).
  int sign() const {
    if (b == 0) return sgn(a);
    if (a == 0) return sgn(b);
    int sa = sgn(a), sb = sgn(b);
    if (sa == sb) return sa;
    // compare a^2 with b^2 D; sign decided by the larger magnitude side
    Rat lhs = a * a, rhs = b * b * D;
    if (lhs == rhs) return 0;  // impossible for squarefree D>1, kept for safety
    return lhs > rhs ? sa : sb;
  }

  // sqrt within the same quadratic field, if it exists there.
  std::optional<Quad> sqrt_same_field() const {
    if (sign() < 0) return std::nullopt;
    if (is_rational()) {
      if (auto r = rat_sqrt(a)) return Quad(*r);
      if (D != 0) return std::nullopt;  // would need a fresh radicand
      return std::nullopt;
    }
    // (u + v sqrt(D))^2 = a + b sqrt(D):  u^2 + v^2 D = a, 2uv = b.
    Rat disc = a * a - b * b * Rat(D);
    auto rd = rat_sqrt(disc);
    if (!rd) return std::nullopt;
    for (int s = 0; s < 2; ++s) {
      Rat u2 = (a + (s ? -*rd : *rd)) / 2;
      if (auto u = rat_sqrt(u2)) {
        if (*u == 0) continue;
        Rat v = b / (2 * *u);
        Quad cand(*u, v, D);
        if (cand * cand == *this && cand.sign() >= 0) return cand;
        cand = -cand;
        if (cand * cand == *this && cand.sign() >= 0) return cand;
      }
    }
    return std::nullopt;
  }

  std::string str() const {
    if (b == 0) return rat_str(a);
    std::string s;
    if (a != 0) s = rat_str(a) + (sgn(b) > 0 ? "+" : "");
    s += rat_str(b) + "r" + std::to_string(D);
    return s;
  }
};

inline int quad_sign(const Quad& q) { return q.sign(); }

inline bool operator<(const Quad& x, const Quad& y) { return (x - y).sign() < 0; }
inline bool operator>(const Quad& x, const Quad& y) { return (x - y).sign() > 0; }
inline bool operator<=(const Quad& x, const Quad& y) { return (x - y).sign() <= 0; }
inline bool operator>=(const Quad& x, const Quad& y) { return (x - y).sign() >= 0; }
inline bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

}  // namespace osum
