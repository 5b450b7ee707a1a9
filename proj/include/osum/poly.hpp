#pragma once

// Sparse exact (Laurent) polynomials in x, y, t over Q, and reduced rational
// functions.  The monomial order used for normalization is graded lex with
// x > y > t, fixed globally.

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "osum/rat.hpp"

namespace osum {

using E3 = std::array<int, 3>;  // exponents of x, y, t

inline E3 operator+(const E3& a, const E3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline E3 operator-(const E3& a, const E3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// graded lex, x > y > t
struct GrlexLess {
  bool operator()(const E3& a, const E3& b) const {
    int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
    if (da != db) return da < db;
    return a < b;  // array lex, x first
  }
};

class Poly {
 public:
  using Map = std::map<E3, Rat, GrlexLess>;

  Poly() = default;
  Poly(const Rat& c) {
    if (c != 0) terms_[{0, 0, 0}] = c;
  }
  Poly(long c) : Poly(Rat(c)) {}
  Poly(int c) : Poly(Rat(c)) {}
  static Poly monomial(const Rat& c, E3 e) {
    Poly p;
    if (c != 0) p.terms_[e] = c;
    return p;
  }
  static Poly var(int i, int e = 1) {
    E3 m{0, 0, 0};
    m[i] = e;
    return monomial(1, m);
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == E3{0, 0, 0});
  }
  Rat constant_value() const {
    if (terms_.empty()) return 0;
    auto it = terms_.find({0, 0, 0});
    return it == terms_.end() ? Rat(0) : it->second;
  }
  size_t nterms() const { return terms_.size(); }

  // leading term under grlex
  std::pair<E3, Rat> lt() const {
    assert(!terms_.empty());
    auto it = std::prev(terms_.end());
    return {it->first, it->second};
  }

  int deg(int v) const {
    int d = 0;
    bool any = false;
    for (auto& [e, c] : terms_) {
      if (!any || e[v] > d) d = e[v];
      any = true;
    }
    return any ? d : -1;
  }
  int min_exp(int v) const {
    bool any = false;
    int d = 0;
    for (auto& [e, c] : terms_) {
      if (!any || e[v] < d) d = e[v];
      any = true;
    }
    return any ? d : 0;
  }
  bool depends_on(int v) const {
    for (auto& [e, c] : terms_)
      if (e[v] != 0) return true;
    return false;
  }
  bool is_laurent_negative() const {
    for (auto& [e, c] : terms_)
      if (e[0] < 0 || e[1] < 0 || e[2] < 0) return true;
    return false;
  }
  bool is_monomial() const { return terms_.size() == 1; }

  void add_term(E3 e, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  friend Poly operator-(const Poly& a) {
    Poly r;
    for (auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  friend Poly operator*(const Poly& a, const Rat& s) {
    Poly r;
    if (s == 0) return r;
    for (auto& [e, c] : a.terms_) r.terms_[e] = c * s;
    return r;
  }
  friend Poly operator*(const Rat& s, const Poly& a) { return a * s; }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly shifted(E3 by) const {
    Poly r;
    for (auto& [e, c] : terms_) r.terms_[e + by] = c;
    return r;
  }

  Poly pow(int n) const {
    assert(n >= 0);
    Poly r(1), base = *this;
    while (n) {
      if (n & 1) r *= base;
      base = (n >>= 1) ? base * base : base;
    }
    return r;
  }

  Poly derivative(int v) const {
    Poly r;
    for (auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      E3 e2 = e;
      e2[v] -= 1;
      r.add_term(e2, c * e[v]);
    }
    return r;
  }

  // substitute (x,y,t) -> given polynomials; exponents must be >= 0
  Poly subst(const Poly& px, const Poly& py, const Poly& pt) const {
    Poly r;
    for (auto& [e, c] : terms_) {
      assert(e[0] >= 0 && e[1] >= 0 && e[2] >= 0);
      r += Poly(c) * px.pow(e[0]) * py.pow(e[1]) * pt.pow(e[2]);
    }
    return r;
  }

  // rational content (gcd of coefficients, sign of leading coefficient)
  Rat content() const {
    if (terms_.empty()) return 0;
    Int num_g = 0, den_l = 1;
    for (auto& [e, c] : terms_) {
      mpz_gcd(num_g.get_mpz_t(), num_g.get_mpz_t(), c.get_num().get_mpz_t());
      mpz_lcm(den_l.get_mpz_t(), den_l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat g(num_g, den_l);
    g.canonicalize();
    if (sgn(lt().second) < 0) g = -g;
    return g;
  }
  Poly primitive() const {
    if (terms_.empty()) return *this;
    Rat c = content();
    Poly r;
    for (auto& [e, cf] : terms_) r.terms_[e] = cf / c;
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    static const char* names[3] = {"x", "y", "t"};
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rat a = c;
      if (first) {
        if (sgn(a) < 0) { os << "-"; a = -a; }
      } else {
        os << (sgn(a) < 0 ? " - " : " + ");
        if (sgn(a) < 0) a = -a;
      }
      first = false;
      bool allz = e[0] == 0 && e[1] == 0 && e[2] == 0;
      bool coef1 = (a == 1);
      if (!coef1 || allz) os << rat_str(a);
      bool wrote = !coef1 || allz;
      for (int v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        if (wrote) os << "*";
        os << names[v];
        if (e[v] != 1) os << "^" << e[v];
        wrote = true;
      }
    }
    return os.str();
  }

 private:
  Map terms_;
};

// ---------------------------------------------------------------------------
// exact division, gcd, squarefree machinery (non-negative exponents expected)

inline std::optional<Poly> try_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  Poly r = a, q;
  auto [eb, cb] = b.lt();
  while (!r.is_zero()) {
    auto [er, cr] = r.lt();
    E3 d = er - eb;
    if (d[0] < 0 || d[1] < 0 || d[2] < 0) return std::nullopt;
    Poly m = Poly::monomial(cr / cb, d);
    q += m;
    r -= m * b;
  }
  return q;
}

inline Poly divide_exact(const Poly& a, const Poly& b) {
  auto q = try_divide(a, b);
  if (!q) throw std::logic_error("divide_exact: not divisible");
  return *q;
}

namespace detail {

// dense univariate view in variable v, coefficients are Polys in the others
inline std::vector<Poly> to_uni(const Poly& p, int v) {
  std::vector<Poly> c;
  for (auto& [e, cf] : p.terms()) {
    assert(e[v] >= 0);
    if ((int)c.size() <= e[v]) c.resize(e[v] + 1);
    E3 e2 = e;
    e2[v] = 0;
    c[e[v]].add_term(e2, cf);
  }
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  return c;
}

inline Poly from_uni(const std::vector<Poly>& c, int v) {
  Poly p;
  for (size_t k = 0; k < c.size(); ++k) p += c[k] * Poly::var(v, (int)k);
  return p;
}

inline int uni_deg(const std::vector<Poly>& c) { return (int)c.size() - 1; }

// pseudo-remainder of f by g (univariate with Poly coefficients)
inline std::vector<Poly> prem(std::vector<Poly> f, const std::vector<Poly>& g) {
  int dg = uni_deg(g);
  assert(dg >= 0);
  const Poly& lg = g.back();
  while (uni_deg(f) >= dg) {
    int df = uni_deg(f);
    Poly lf = f.back();
    // f = lg*f - lf * x^(df-dg) * g
    for (auto& c : f) c = lg * c;
    for (int k = 0; k <= dg; ++k) f[df - dg + k] -= lf * g[k];
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    if (f.empty()) break;
  }
  return f;
}

}  // namespace detail

Poly gcd_poly(const Poly& a, const Poly& b);

namespace detail {
inline Poly gcd_list(const std::vector<Poly>& v) {
  Poly g;
  for (auto& p : v) g = g.is_zero() ? p : gcd_poly(g, p);
  return g;
}

// coefficients of p as a univariate polynomial in v, all other variables
// evaluated at the given rational point
inline std::vector<Rat> eval_except(const Poly& p, int v, const Rat pt[3]) {
  std::vector<Rat> c;
  for (auto& [e, cf] : p.terms()) {
    Rat val = cf;
    for (int u = 0; u < 3; ++u) {
      if (u == v) continue;
      for (int k = 0; k < e[u]; ++k) val *= pt[u];
    }
    if ((int)c.size() <= e[v]) c.resize(e[v] + 1, Rat(0));
    c[e[v]] += val;
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

inline std::vector<Rat> gcd_uni_rat(std::vector<Rat> a, std::vector<Rat> b) {
  auto deg = [](const std::vector<Rat>& p) { return (int)p.size() - 1; };
  if (deg(a) < deg(b)) std::swap(a, b);
  while (!b.empty()) {
    while (deg(a) >= deg(b) && !a.empty()) {
      Rat f = a.back() / b.back();
      int sh = deg(a) - deg(b);
      for (int i = 0; i <= deg(b); ++i) a[i + sh] -= f * b[i];
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    std::swap(a, b);
  }
  return a;
}

// Rigorous coprimality certificate by specialization: if evaluating the other
// variables preserves deg_v of both operands and the univariate gcd is
// constant, then deg_v(gcd) = 0 (the gcd's leading v-coefficient divides the
// operands' and so cannot vanish at the point).  Certifying every shared
// variable proves the gcd is constant.
inline bool certified_coprime(const Poly& a, const Poly& b) {
  static const Rat pts[4][3] = {{Rat(2), Rat(3), Rat(5)},
                                {Rat(7), Rat(5), Rat(3)},
                                {Rat(4), Rat(9), Rat(2)},
                                {Rat(11), Rat(6), Rat(13)}};
  for (int v = 0; v < 3; ++v) {
    if (!a.depends_on(v) || !b.depends_on(v)) continue;
    bool certified = false;
    for (auto& pt : pts) {
      auto av = eval_except(a, v, pt), bv = eval_except(b, v, pt);
      if ((int)av.size() - 1 != a.deg(v) || (int)bv.size() - 1 != b.deg(v)) continue;
      certified = gcd_uni_rat(av, bv).size() == 1;
      break;  // degrees preserved: the bound is decided either way
    }
    if (!certified) return false;
  }
  return true;
}

}  // namespace detail

// gcd of polynomials with non-negative exponents; result primitive with
// positive leading coefficient (constants collapse to 1).
inline Poly gcd_poly(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly(0);
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a.is_monomial() || b.is_monomial()) {
    const Poly& m = a.is_monomial() ? a : b;
    const Poly& p = a.is_monomial() ? b : a;
    E3 e;
    for (int i = 0; i < 3; ++i) e[i] = std::min(m.lt().first[i], p.min_exp(i));
    return Poly::monomial(1, e);
  }
  if (a == b) return a.primitive();
  if (detail::certified_coprime(a, b)) return Poly(1);
  int v = -1;
  for (int i = 0; i < 3; ++i)
    if (a.depends_on(i) || b.depends_on(i)) { v = i; break; }
  if (v < 0) return Poly(1);  // both constants
  auto fa = detail::to_uni(a, v), fb = detail::to_uni(b, v);
  Poly ca = detail::gcd_list(fa), cb = detail::gcd_list(fb);
  Poly cont = gcd_poly(ca, cb);
  auto strip = [](std::vector<Poly>& f, const Poly& c) {
    for (auto& p : f) p = divide_exact(p, c);
  };
  strip(fa, ca);
  strip(fb, cb);
  if (detail::uni_deg(fa) < detail::uni_deg(fb)) std::swap(fa, fb);
  // subresultant PRS: growth controlled by exact divisions, no per-step gcd
  Poly sg(1), sh(1);
  bool constant_gcd = false;
  while (true) {
    int delta = detail::uni_deg(fa) - detail::uni_deg(fb);
    auto r = detail::prem(fa, fb);
    if (r.empty()) break;  // fb is the gcd candidate
    Poly divisor = sg * sh.pow(delta);
    strip(r, divisor);
    sg = fb.back();
    if (delta == 1) sh = sg;
    else if (delta > 1) sh = divide_exact(sg.pow(delta), sh.pow(delta - 1));
    fa = std::move(fb);
    fb = std::move(r);
    if (detail::uni_deg(fb) == 0) {
      constant_gcd = true;
      break;
    }
  }
  Poly g;
  if (constant_gcd || detail::uni_deg(fb) <= 0) g = Poly(1);
  else {
    Poly cr = detail::gcd_list(fb);
    strip(fb, cr);
    g = detail::from_uni(fb, v).primitive();
  }
  return (cont * g).primitive();
}

inline Poly squarefree_part(const Poly& p) {
  if (p.is_zero() || p.is_constant()) return p;
  Poly g = p;
  Poly d = gcd_poly(gcd_poly(p.derivative(0), p.derivative(1)), p.derivative(2));
  Poly gg = gcd_poly(p, d);
  if (gg.is_constant()) return p.primitive();
  return divide_exact(p.primitive(), gg.primitive()).primitive();
}

// exact polynomial square root, if p is a perfect square
inline std::optional<Poly> sqrt_poly(const Poly& p) {
  if (p.is_zero()) return Poly(0);
  if (p.is_constant()) {
    auto r = rat_sqrt(p.constant_value());
    if (!r) return std::nullopt;
    return Poly(*r);
  }
  int v = -1;
  for (int i = 0; i < 3; ++i)
    if (p.depends_on(i)) { v = i; break; }
  auto f = detail::to_uni(p, v);
  int d = detail::uni_deg(f);
  if (d % 2) return std::nullopt;
  auto top = sqrt_poly(f.back());
  if (!top) return std::nullopt;
  int h = d / 2;
  std::vector<Poly> q(h + 1);
  q[h] = *top;
  for (int k = h - 1; k >= 0; --k) {
    // coefficient of v^(h+k) in q^2 must match f[h+k]
    Poly s;
    for (int i = k + 1; i < h; ++i) {
      int j = h + k - i;
      if (j > i) continue;
      if (j == i) s += q[i] * q[i];
      else s += 2 * Rat(1) * q[i] * q[j];
    }
    Poly rem = ((int)f.size() > h + k ? f[h + k] : Poly()) - s;
    auto qk = try_divide(rem, 2 * Rat(1) * q[h]);
    if (!qk) return std::nullopt;
    q[k] = *qk;
  }
  Poly cand = detail::from_uni(q, v);
  if (cand * cand == p) return cand;
  if (cand * cand == -1 * Rat(1) * p) return std::nullopt;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// reduced rational functions p/q over Q[x,y,t] (inputs may be Laurent)

class RatFun {
 public:
  RatFun() : num_(), den_(1) {}
  RatFun(const Rat& c) : num_(c), den_(1) {}
  RatFun(long c) : num_(Rat(c)), den_(1) {}
  RatFun(int c) : num_(Rat(c)), den_(1) {}
  RatFun(const Poly& p) : num_(p), den_(1) { normalize(); }
  RatFun(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
    normalize();
  }

  static RatFun var(int i, int e = 1) { return RatFun(Poly::var(i, e)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_poly() const { return den_.is_constant() && den_.constant_value() == 1; }
  bool depends_on(int v) const { return num_.depends_on(v) || den_.depends_on(v); }

  // arithmetic keeps operands reduced and only computes small gcds
  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Poly g = gcd_poly(a.den_, b.den_);
    Poly da = g.is_constant() ? a.den_ : divide_exact(a.den_, g);
    Poly db = g.is_constant() ? b.den_ : divide_exact(b.den_, g);
    Poly t = a.num_ * db + b.num_ * da;
    if (t.is_zero()) return RatFun();
    Poly h = gcd_poly(t, g);
    RatFun r;
    r.num_ = h.is_constant() ? t : divide_exact(t, h);
    r.den_ = da * (h.is_constant() ? b.den_ : divide_exact(b.den_, h));
    r.unit_normalize();
    return r;
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator-(const RatFun& a) {
    RatFun r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    Poly g1 = gcd_poly(a.num_, b.den_);
    Poly g2 = gcd_poly(b.num_, a.den_);
    RatFun r;
    r.num_ = (g1.is_constant() ? a.num_ : divide_exact(a.num_, g1)) *
             (g2.is_constant() ? b.num_ : divide_exact(b.num_, g2));
    r.den_ = (g2.is_constant() ? a.den_ : divide_exact(a.den_, g2)) *
             (g1.is_constant() ? b.den_ : divide_exact(b.den_, g1));
    r.unit_normalize();
    return r;
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw std::domain_error("RatFun: division by zero");
    return a * b.inv();
  }
  RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
  RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
  RatFun& operator*=(const RatFun& b) { return *this = *this * b; }
  RatFun& operator/=(const RatFun& b) { return *this = *this / b; }
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  RatFun inv() const {
    if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
    RatFun r;
    r.num_ = den_;
    r.den_ = num_;
    r.unit_normalize();
    return r;
  }

  std::string str() const {
    if (is_poly()) return num_.str();
    std::string n = num_.nterms() > 1 ? "(" + num_.str() + ")" : num_.str();
    std::string d = den_.nterms() > 1 ? "(" + den_.str() + ")" : den_.str();
    return n + "/" + d;
  }

 private:
  // denominator primitive with positive leading coefficient; assumes the
  // fraction is already reduced
  void unit_normalize() {
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    Rat c = den_.content();
    if (c != 1) {
      den_ = den_ * (Rat(1) / c);
      num_ = num_ * (Rat(1) / c);
    }
  }

  void normalize() {
    if (num_.is_zero()) { den_ = Poly(1); return; }
    // clear Laurent exponents
    E3 sh{0, 0, 0};
    for (int v = 0; v < 3; ++v) {
      int m = std::min({num_.min_exp(v), den_.min_exp(v), 0});
      sh[v] = -m;
    }
    if (sh != E3{0, 0, 0}) {
      num_ = num_.shifted(sh);
      den_ = den_.shifted(sh);
    }
    // common monomial factor
    E3 mn{0, 0, 0};
    for (int v = 0; v < 3; ++v) mn[v] = -std::min(num_.min_exp(v), den_.min_exp(v));
    if (mn != E3{0, 0, 0}) {
      num_ = num_.shifted(mn);
      den_ = den_.shifted(mn);
    }
    Poly g = gcd_poly(num_, den_);
    if (!g.is_constant()) {
      num_ = divide_exact(num_, g);
      den_ = divide_exact(den_, g);
    }
    // denominator primitive with positive leading coefficient
    Rat c = den_.content();
    den_ = den_ * (Rat(1) / c);
    num_ = num_ * (Rat(1) / c);
  }

  Poly num_, den_;
};

}  // namespace osum
