#pragma once

// Splitting fields over Q(x,y) by the shape-lemma construction: a primitive
// element Z with squarefree eliminant g(Z) and every adjoined root written
// as a polynomial in Z.  Arithmetic is dynamic evaluation: the eliminant may
// secretly be reducible, and inverting a zero divisor raises a split event
// carrying the discovered factorization.

#include <memory>
#include <random>
#include <variant>

#include "osum/groebner.hpp"
#include "osum/upoly.hpp"

namespace osum {

struct Split {
  UPoly<RatFun> f1, f2;  // g = f1 * f2, both monic non-constant
};

class ZeroDivisorSplit : public EngineError {
 public:
  explicit ZeroDivisorSplit(Split s)
      : EngineError(ErrKind::DivisionByZero, "zero divisor; eliminant splits"),
        split(std::move(s)) {}
  Split split;
};

struct SplittingField {
  UPoly<RatFun> g;                       // monic, squarefree
  std::vector<UPoly<RatFun>> rootExprs;  // degree < deg g, one per adjoined root
  std::vector<std::pair<int, int>> rootIndex;  // (minpoly index, root number)
  std::vector<int> witness;                    // primitive-element coefficients a_ij

  int deg() const { return g.deg(); }
  bool trivial() const { return g.deg() == 1; }

  static std::shared_ptr<const SplittingField> rational() {
    static auto f = [] {
      auto r = std::make_shared<SplittingField>();
      r->g = UPoly<RatFun>::var();
      return r;
    }();
    return f;
  }
};

using FieldPtr = std::shared_ptr<const SplittingField>;

// extended gcd: returns (d, s) with d = gcd(a,b) monic and s*a = d mod b
inline std::pair<UPoly<RatFun>, UPoly<RatFun>> egcd_upoly(UPoly<RatFun> a, UPoly<RatFun> b) {
  UPoly<RatFun> s0(RatFun(1)), s1;
  while (!b.is_zero()) {
    auto [q, r] = UPoly<RatFun>::divmod(a, b);
    a = b;
    b = r;
    UPoly<RatFun> s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (a.is_zero()) return {a, s0};
  RatFun l = a.lc();
  return {a * l.inv(), s0 * l.inv()};
}

class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(long v) : p_(RatFun(v)) {}
  FieldElem(int v) : p_(RatFun(v)) {}
  FieldElem(const RatFun& c) : p_(c) {}
  FieldElem(FieldPtr f, UPoly<RatFun> p) : fld_(std::move(f)), p_(std::move(p)) { reduce(); }

  static FieldElem root(const FieldPtr& f, int i) { return FieldElem(f, f->rootExprs.at(i)); }
  static FieldElem primitive(const FieldPtr& f) { return FieldElem(f, UPoly<RatFun>::var()); }

  const FieldPtr& field() const { return fld_; }
  const UPoly<RatFun>& rep() const { return p_; }
  bool is_zero() const { return p_.is_zero(); }
  bool is_rational() const { return p_.deg() <= 0; }
  RatFun rational_value() const {
    if (!is_rational()) throw EngineError(ErrKind::PreconditionViolated, "element not rational");
    return p_.coeff(0);
  }

  static FieldPtr merge(const FieldElem& a, const FieldElem& b) {
    if (!a.fld_) return b.fld_;
    if (!b.fld_) return a.fld_;
    if (a.fld_ != b.fld_ && a.fld_->g != b.fld_->g)
      throw EngineError(ErrKind::PreconditionViolated, "elements of different fields");
    return a.fld_;
  }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    return FieldElem(merge(a, b), a.p_ + b.p_);
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    return FieldElem(merge(a, b), a.p_ - b.p_);
  }
  friend FieldElem operator-(const FieldElem& a) { return FieldElem(a.fld_, -a.p_); }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    return FieldElem(merge(a, b), a.p_ * b.p_);
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inv(); }
  FieldElem& operator+=(const FieldElem& b) { return *this = *this + b; }
  FieldElem& operator-=(const FieldElem& b) { return *this = *this - b; }
  FieldElem& operator*=(const FieldElem& b) { return *this = *this * b; }
  FieldElem& operator/=(const FieldElem& b) { return *this = *this / b; }
  friend bool operator==(const FieldElem& a, const FieldElem& b) { return (a - b).is_zero(); }
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

  FieldElem inv() const {
    if (is_zero()) throw EngineError(ErrKind::DivisionByZero, "inverse of zero field element");
    if (!fld_ || fld_->trivial() || p_.deg() == 0)
      return FieldElem(fld_, UPoly<RatFun>(p_.coeff(0).inv()));
    auto [d, s] = egcd_upoly(p_, fld_->g);
    if (d.deg() == 0) return FieldElem(fld_, s * d.lc().inv());
    if (d.deg() == fld_->g.deg())
      throw EngineError(ErrKind::DivisionByZero, "inverse of zero field element");
    auto [cof, rem] = UPoly<RatFun>::divmod(fld_->g, d);
    (void)rem;
    throw ZeroDivisorSplit(Split{d, cof.monic()});
  }

  std::string str() const {
    if (p_.is_zero()) return "0";
    std::string s;
    for (int i = p_.deg(); i >= 0; --i) {
      RatFun c = p_.coeff(i);
      if (c.is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      if (i >= 1) s += "*Z";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void reduce() {
    if (fld_ && !fld_->g.is_zero() && p_.deg() >= fld_->g.deg())
      p_ = UPoly<RatFun>::divmod(p_, fld_->g).second;
  }
  FieldPtr fld_;
  UPoly<RatFun> p_;
};

inline std::variant<FieldElem, Split> field_inv(const FieldElem& e) {
  try {
    return e.inv();
  } catch (const ZeroDivisorSplit& z) {
    return z.split;
  }
}

// restrict a field to one branch of a split factor (monic divisor of g)
inline FieldPtr restrict_field(const FieldPtr& f, const UPoly<RatFun>& factor) {
  auto r = std::make_shared<SplittingField>();
  r->g = factor;
  r->witness = f->witness;
  r->rootIndex = f->rootIndex;
  for (auto& e : f->rootExprs) r->rootExprs.push_back(UPoly<RatFun>::divmod(e, factor).second);
  return r;
}

inline FieldElem restrict_elem(const FieldElem& e, const FieldPtr& branch) {
  return FieldElem(branch, e.rep());
}

// ---------------------------------------------------------------------------
// shape-lemma splitting field

struct ShapeSplitOptions {
  int coeff_bound = 5;
  int retries = 20;
  unsigned seed = 0xC0FFEE;
  long gb_budget = 2000000;
};

namespace detail {

// Build MVPoly in vars [Y, X_0..X_{N-1}, Z] from a univariate minpoly in X_k.
inline MVPoly minpoly_at(const UPoly<RatFun>& m, int nvars, int var) {
  MVPoly r(nvars);
  for (int i = 0; i <= m.deg(); ++i) {
    if (m.coeff(i).is_zero()) continue;
    Expv e(nvars, 0);
    e[var] = i;
    r.add_term(e, m.coeff(i));
  }
  return r;
}

}  // namespace detail

// Splitting field of the given squarefree minimal polynomials: adjoins all
// roots of every m_i, with roots of the same m_i forced pairwise distinct.
inline FieldPtr shape_split(const std::vector<UPoly<RatFun>>& minpolys,
                            const ShapeSplitOptions& opt = {}) {
  for (auto& m : minpolys) {
    if (m.deg() < 1) throw EngineError(ErrKind::NotSquarefree, "constant minimal polynomial");
    if (gcd_upoly(m, m.derivative()).deg() != 0)
      throw EngineError(ErrKind::NotSquarefree, "minimal polynomial not squarefree");
  }
  if (minpolys.empty()) return SplittingField::rational();

  int N = 0;
  std::vector<std::pair<int, int>> rootIndex;
  for (size_t i = 0; i < minpolys.size(); ++i)
    for (int j = 0; j < minpolys[i].deg(); ++j) rootIndex.push_back({(int)i, j}), ++N;

  std::mt19937 rng(opt.seed);
  std::uniform_int_distribution<int> draw(1, 2 * opt.coeff_bound);

  int nv = N + 2;  // Y, X_0..X_{N-1}, Z
  const int YV = 0, ZV = nv - 1;
  auto XV = [](int k) { return 1 + k; };

  for (int attempt = 0; attempt < opt.retries; ++attempt) {
    std::vector<int> a(N);
    for (int k = 0; k < N; ++k) {
      int v = draw(rng);
      a[k] = v <= opt.coeff_bound ? v : opt.coeff_bound - v;  // {-B..B} \ {0}
    }

    bool all_quadratic = true;
    for (auto& m : minpolys)
      if (m.deg() != 2) all_quadratic = false;

    std::vector<MVPoly> gens;
    int k = 0;
    MVPoly prod(nv, RatFun(1));
    for (size_t i = 0; i < minpolys.size(); ++i) {
      int d = minpolys[i].deg();
      if (all_quadratic) {
        // saturated ideal has a Vieta presentation: second root = -b - first
        auto m = minpolys[i].monic();
        gens.push_back(detail::minpoly_at(m, nv, XV(k)));
        gens.push_back(MVPoly::var(nv, XV(k)) + MVPoly::var(nv, XV(k + 1)) +
                       MVPoly(nv, m.coeff(1)));
      } else {
        for (int j = 0; j < d; ++j) gens.push_back(detail::minpoly_at(minpolys[i], nv, XV(k + j)));
        for (int j = 0; j < d; ++j)
          for (int l = j + 1; l < d; ++l)
            prod *= MVPoly::var(nv, XV(k + j)) - MVPoly::var(nv, XV(k + l));
      }
      k += d;
    }
    // saturation: roots of the same minpoly are pairwise distinct
    if (!all_quadratic) gens.push_back(MVPoly(nv, RatFun(1)) - MVPoly::var(nv, YV) * prod);
    // primitive element
    MVPoly zgen = MVPoly::var(nv, ZV);
    for (int q = 0; q < N; ++q) zgen -= MVPoly::var(nv, XV(q)) * MVPoly(nv, RatFun(Rat(a[q])));
    gens.push_back(zgen);

    std::vector<MVPoly> gb;
    try {
      gb = gb_lex(gens, opt.gb_budget);
    } catch (const EngineError&) {
      continue;
    }

    // shape check: one basis element per X variable of the form X_k - g_k(Z),
    // one element in Z alone, anything else may involve only Y and Z
    UPoly<RatFun> g;
    std::vector<UPoly<RatFun>> roots(N);
    bool ok = true;
    auto as_uni_in_Z = [&](const MVPoly& p) -> std::optional<UPoly<RatFun>> {
      UPoly<RatFun> r;
      for (auto& [e, c] : p.terms()) {
        for (int v2 = 0; v2 < nv - 1; ++v2)
          if (e[v2] != 0) return std::nullopt;
        r.set_coeff(e[ZV], r.coeff(e[ZV]) + c);
      }
      return r;
    };
    std::vector<bool> seen(N, false);
    for (auto& p : gb) {
      auto [e, c] = p.lt();
      if (e[YV] != 0) continue;  // saturation variable row, ignored
      bool isX = false;
      for (int q = 0; q < N && !isX; ++q) {
        if (e[XV(q)] == 1) {
          // must be X_q - g_q(Z)
          Expv rest = e;
          rest[XV(q)] = 0;
          if (rest != Expv(nv, 0)) { ok = false; break; }
          MVPoly tail = p - MVPoly::var(nv, XV(q)) * MVPoly(nv, c);
          auto u = as_uni_in_Z(tail * (-c.inv()));
          if (!u) { ok = false; break; }
          roots[q] = *u;
          seen[q] = true;
          isX = true;
        } else if (e[XV(q)] > 1) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      if (!isX) {
        auto u = as_uni_in_Z(p);
        if (!u) { ok = false; break; }
        if (!g.is_zero()) { ok = false; break; }
        g = *u;
      }
    }
    for (int q = 0; q < N; ++q)
      if (!seen[q]) ok = false;
    if (!ok || g.deg() < 1) continue;

    g = squarefree_upoly(g).monic();
    for (auto& r : roots) r = UPoly<RatFun>::divmod(r, g).second;

    // verify annihilation and distinctness after the radical step
    bool verified = true;
    for (int q = 0; q < N && verified; ++q) {
      auto val = minpolys[rootIndex[q].first].compose(roots[q]);
      if (!UPoly<RatFun>::divmod(val, g).second.is_zero()) verified = false;
    }
    for (int q = 0; q < N && verified; ++q)
      for (int l = q + 1; l < N && verified; ++l)
        if (UPoly<RatFun>::divmod(roots[q] - roots[l], g).second.is_zero()) verified = false;
    if (!verified) continue;

    auto f = std::make_shared<SplittingField>();
    f->g = g;
    f->rootExprs = roots;
    f->rootIndex = rootIndex;
    f->witness = a;
    return f;
  }
  throw EngineError(ErrKind::ResourceExhausted, "shape_split retry budget exhausted");
}

// Rescale the primitive element of a degree-2 field with eliminant Z^2 - d so
// that d becomes polynomial with square content removed (matches minimal
// polynomials up to a unit).
inline FieldPtr normalize_quadratic(const FieldPtr& f) {
  if (f->deg() != 2 || !f->g.coeff(1).is_zero()) return f;
  RatFun d = -f->g.coeff(0);
  if (d.is_zero()) return f;
  // clear the denominator by a square: d' = d * u^2
  RatFun u(1);
  if (auto q2 = sqrt_poly(d.den())) u = RatFun(*q2);
  else u = RatFun(d.den());
  RatFun d2 = d * u * u;
  // remove square rational content from the numerator
  Rat c = d2.num().content();
  auto [ns, nr] = squarefree_decompose(c.get_num());
  auto [ds, dr] = squarefree_decompose(c.get_den());
  Rat r(nr, dr);
  r.canonicalize();
  if (r != 1) {
    u = u / RatFun(Poly(r));
    d2 = d * u * u;
  }
  if (u == RatFun(1)) return f;
  // Z_old = Z_new / u
  auto nf = std::make_shared<SplittingField>();
  UPoly<RatFun> ng;
  ng.set_coeff(2, RatFun(1));
  ng.set_coeff(0, -d2);
  nf->g = ng;
  nf->witness = f->witness;
  nf->rootIndex = f->rootIndex;
  UPoly<RatFun> zsub(std::vector<RatFun>{RatFun(0), u.inv()});
  for (auto& e : f->rootExprs)
    nf->rootExprs.push_back(UPoly<RatFun>::divmod(e.compose(zsub), ng).second);
  return nf;
}

// ---------------------------------------------------------------------------
// Res_Z(g(Z), X^2 - d(Z)) as a polynomial in X over Q(x,y), for monic g.
// Computed as det(X^2 I - d(M_g)) by evaluation and interpolation.
inline UPoly<RatFun> resultant_quadratic(const UPoly<RatFun>& g, const UPoly<RatFun>& d) {
  int n = g.deg();
  // companion matrix of g
  std::vector<std::vector<RatFun>> M(n, std::vector<RatFun>(n, RatFun(0)));
  for (int i = 1; i < n; ++i) M[i][i - 1] = RatFun(1);
  for (int i = 0; i < n; ++i) M[i][n - 1] = -g.coeff(i);
  // d(M)
  std::vector<std::vector<RatFun>> D(n, std::vector<RatFun>(n, RatFun(0)));
  std::vector<std::vector<RatFun>> P(n, std::vector<RatFun>(n, RatFun(0)));
  for (int i = 0; i < n; ++i) P[i][i] = RatFun(1);
  for (int k = 0; k <= d.deg(); ++k) {
    if (!d.coeff(k).is_zero())
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D[i][j] += P[i][j] * d.coeff(k);
    if (k == d.deg()) break;
    std::vector<std::vector<RatFun>> Q(n, std::vector<RatFun>(n, RatFun(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) Q[i][j] += P[i][l] * M[l][j];
    P = std::move(Q);
  }
  // interpolate det(s I - d(M)) in s, then substitute s = X^2
  std::vector<RatFun> xs, ys;
  for (int s = 0; s <= n; ++s) {
    auto A = D;
    for (int i = 0; i < n; ++i) A[i][i] = RatFun(Rat(s)) - A[i][i];
    xs.push_back(RatFun(Rat(s)));
    ys.push_back(det_field(A));
  }
  UPoly<RatFun> chi = interpolate(xs, ys);  // det(s I - d(M)) as poly in s
  UPoly<RatFun> r;
  for (int i = 0; i <= chi.deg(); ++i) r.set_coeff(2 * i, chi.coeff(i));
  return r;
}

}  // namespace osum
