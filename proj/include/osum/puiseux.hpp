#pragma once

// Newton-Puiseux series with respect to an additive total order on Q^2:
// finite encodings (explicit terms + a shifted strictly convex cone holding
// every undetermined term), the generalized Newton-Puiseux algorithm for
// polynomial roots, expansion of rational functions, encoding arithmetic,
// and support-vertex estimation.
//
// Encoding semantics: a non-exact encoding with terms t_1,...,t_m, region
// (v, C) and cut exponent theta represents a series such that
//   * every listed term is a true term of the series, and
//   * every unlisted term has exponent in (v + C) and order-value strictly
//     below theta (in particular, the listed terms are complete at and above
//     theta).

#include <map>
#include <optional>

#include "osum/cones.hpp"
#include "osum/poly.hpp"
#include "osum/upoly.hpp"

namespace osum {

using QExp = std::array<Rat, 2>;

inline QExp operator+(const QExp& a, const QExp& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline QExp operator-(const QExp& a, const QExp& b) { return {a[0] - b[0], a[1] - b[1]}; }

struct QExpLex {
  bool operator()(const QExp& a, const QExp& b) const {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  }
};

// sparse polynomial with rational exponents in (x,y) and Quad coefficients
class QPoly {
 public:
  using Map = std::map<QExp, Quad, QExpLex>;

  QPoly() = default;
  explicit QPoly(const Quad& c) {
    if (!c.is_zero()) terms_[{Rat(0), Rat(0)}] = c;
  }
  static QPoly monomial(const Quad& c, const QExp& e) {
    QPoly p;
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }
  static QPoly from_poly(const Poly& p) {  // x,y only; t exponent must be 0
    QPoly r;
    for (auto& [e, c] : p.terms()) {
      if (e[2] != 0) throw EngineError(ErrKind::PreconditionViolated, "t in series coefficient");
      r.terms_[{Rat(e[0]), Rat(e[1])}] = Quad(c);
    }
    return r;
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const QExp& e, const Quad& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend QPoly operator+(const QPoly& a, const QPoly& b) {
    QPoly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend QPoly operator-(const QPoly& a, const QPoly& b) {
    QPoly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  friend QPoly operator*(const QPoly& a, const QPoly& b) {
    QPoly r;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  QPoly shifted_scaled(const QExp& e, const Quad& c) const {
    QPoly r;
    if (c.is_zero()) return r;
    for (auto& [te, tc] : terms_) r.terms_[te + e] = tc * c;
    return r;
  }
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.terms_ == b.terms_; }

  // leading term under the order (unique because the order is total)
  std::pair<QExp, Quad> lt(const OrderWeight& w) const {
    auto it = terms_.begin();
    auto best = it;
    for (++it; it != terms_.end(); ++it)
      if (w.cmp(it->first, best->first) > 0) best = it;
    return {best->first, best->second};
  }

 private:
  Map terms_;
};

// ---------------------------------------------------------------------------
// encodings

struct PTerm {
  QExp e;
  Quad c;
};

struct SupportEstimate {
  std::vector<std::pair<QExp, Cone>> vertices;
};

class PuiseuxEncoding {
 public:
  PuiseuxEncoding() = default;
  explicit PuiseuxEncoding(OrderWeight w) : ord_(std::move(w)) {}

  static PuiseuxEncoding exact(OrderWeight w, std::vector<PTerm> terms) {
    PuiseuxEncoding e(std::move(w));
    e.terms_ = std::move(terms);
    e.exact_ = true;
    e.sort_terms();
    return e;
  }
  static PuiseuxEncoding with_tail(OrderWeight w, std::vector<PTerm> terms, QExp vertex,
                                   Cone cone, QExp cut) {
    PuiseuxEncoding e(std::move(w));
    e.terms_ = std::move(terms);
    e.exact_ = false;
    e.tail_vertex_ = std::move(vertex);
    e.tail_cone_ = std::move(cone);
    e.tcut_ = std::move(cut);
    e.sort_terms();
    e.check_tail();
    return e;
  }

  const OrderWeight& order() const { return ord_; }
  const std::vector<PTerm>& terms() const { return terms_; }
  bool is_exact() const { return exact_; }
  bool is_zero() const { return exact_ && terms_.empty(); }
  const QExp& tail_vertex() const { return tail_vertex_; }
  const Cone& tail_cone() const { return tail_cone_; }
  const QExp& cut() const { return tcut_; }

  const PTerm& lead() const {
    if (terms_.empty()) throw EngineError(ErrKind::PreconditionViolated, "lead of empty series");
    return terms_.front();
  }

  // order-largest point of the support estimate
  QExp top_exp() const {
    if (exact_ || (!terms_.empty() && ord_.cmp(terms_.front().e, tail_vertex_) >= 0))
      return lead().e;
    return tail_vertex_;
  }

  // could the true series have an unlisted term at exponent e?
  bool hidden_possible(const QExp& e) const {
    if (exact_) return false;
    if (ord_.cmp(e, tcut_) >= 0) return false;
    QExp d = e - tail_vertex_;
    return tail_cone_.contains(qvec2(d[0], d[1]));
  }

  long ramification() const {
    Int l = 1;
    auto fold = [&](const Rat& q) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    };
    for (auto& t : terms_) fold(t.e[0]), fold(t.e[1]);
    if (!exact_) fold(tail_vertex_[0]), fold(tail_vertex_[1]);
    if (!l.fits_slong_p() || l.get_si() > 64)
      throw EngineError(ErrKind::RamificationOverflow, "ramification exceeds 64");
    return l.get_si();
  }

  // cone C with supp(series) contained in top_exp + C; generators are
  // order-non-positive
  Cone hull_cone() const {
    if (hull_) return *hull_;
    if (terms_.empty() && exact_) return Cone(2);
    QExp anchor = top_exp();
    std::vector<QVec> g;
    for (auto& t : terms_) {
      QExp d = t.e - anchor;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
    }
    if (!exact_) {
      QExp d = tail_vertex_ - anchor;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
      for (auto& v : tail_cone_.qgens()) g.push_back(v);
    }
    return Cone(2, g);
  }

  // a sharper support bound than the one derived from terms + region, when
  // one is known; generators must be order-non-positive.  Both bounds are
  // sound, so the stored hull is their intersection (the dual of the hull of
  // the duals, exact for polyhedral cones).
  void set_hull_override(Cone c) {
    QExp zero{Rat(0), Rat(0)};
    for (auto& gen : c.gens()) {
      QExp g{Rat(gen[0]), Rat(gen[1])};
      if (ord_.cmp(g, zero) > 0)
        throw EngineError(ErrKind::PreconditionViolated, "hull cone not order-negative");
    }
    hull_.reset();
    Cone base = hull_cone();
    hull_ = cone_dual(cone_hull(cone_dual(c), cone_dual(base)));
  }

  friend PuiseuxEncoding operator-(const PuiseuxEncoding& a) {
    PuiseuxEncoding r = a;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend PuiseuxEncoding operator+(const PuiseuxEncoding& a, const PuiseuxEncoding& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const OrderWeight& w = a.pick_order(b);
    QPoly sum;
    for (auto& t : a.terms_) sum.add_term(t.e, t.c);
    for (auto& t : b.terms_) sum.add_term(t.e, t.c);
    if (a.exact_ && b.exact_) return from_qpoly_exact(w, sum);
    // a merged term is kept when neither operand could hide a contribution
    // at its exponent; the hidden terms of the sum live in the union of the
    // operand regions
    std::vector<PTerm> keep;
    for (auto& [e, c] : sum.terms())
      if (!a.hidden_possible(e) && !b.hidden_possible(e)) keep.push_back({e, c});
    QExp cutv = a.exact_ ? b.tcut_
                : b.exact_ ? a.tcut_
                : w.cmp(a.tcut_, b.tcut_) >= 0 ? a.tcut_ : b.tcut_;
    QExp v;
    if (a.exact_) v = b.tail_vertex_;
    else if (b.exact_) v = a.tail_vertex_;
    else v = w.cmp(a.tail_vertex_, b.tail_vertex_) >= 0 ? a.tail_vertex_ : b.tail_vertex_;
    std::vector<QVec> g;
    auto absorb = [&](const PuiseuxEncoding& e) {
      if (e.exact_) return;
      QExp d = e.tail_vertex_ - v;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
      for (auto& c : e.tail_cone_.qgens()) g.push_back(c);
    };
    absorb(a);
    absorb(b);
    PuiseuxEncoding r = with_tail(w, std::move(keep), v, Cone(2, g), cutv);
    // sharper support bound when no cancellation occurred at the top
    if (!a.is_zero() && !b.is_zero()) {
      QExp top = r.top_exp(), sa = a.top_exp() - top, sb = b.top_exp() - top;
      QExp zero{Rat(0), Rat(0)};
      if (w.cmp(sa, zero) <= 0 && w.cmp(sb, zero) <= 0) {
        // an exact operand contributes its points directly, anchored at the
        // top of the sum; an inexact one contributes its shifted hull cone
        std::vector<QVec> hg;
        auto fold = [&](const PuiseuxEncoding& e, const QExp& s) {
          if (e.exact_) {
            for (auto& t : e.terms_) {
              QExp d = t.e - top;
              if (d[0] != 0 || d[1] != 0) hg.push_back(qvec2(d[0], d[1]));
            }
            return;
          }
          for (auto& x : e.hull_cone().qgens()) hg.push_back(x);
          if (s[0] != 0 || s[1] != 0) hg.push_back(qvec2(s[0], s[1]));
        };
        fold(a, sa);
        fold(b, sb);
        r.set_hull_override(Cone(2, hg));
      }
    }
    return r;
  }
  friend PuiseuxEncoding operator-(const PuiseuxEncoding& a, const PuiseuxEncoding& b) {
    return a + (-b);
  }

  friend PuiseuxEncoding operator*(const PuiseuxEncoding& a, const PuiseuxEncoding& b) {
    const OrderWeight& w = a.pick_order(b);
    if (a.is_zero() || b.is_zero()) return exact(w, {});
    QPoly prod;
    for (auto& ta : a.terms_)
      for (auto& tb : b.terms_) prod.add_term(ta.e + tb.e, ta.c * tb.c);
    if (a.exact_ && b.exact_) return from_qpoly_exact(w, prod);
    // hidden(a*b) is inside hidden(a) + supp(b) and supp(a) + hidden(b);
    // each is bounded by (region vertex + top of the other factor) shifted
    // by the region cone plus the other factor's hull cone
    struct Part {
      bool active = false;
      QExp anchor, cut;
      Cone cone{2};
    };
    auto part = [&](const PuiseuxEncoding& t, const PuiseuxEncoding& o) {
      Part p;
      if (t.exact_) return p;
      p.active = true;
      p.anchor = t.tail_vertex_ + o.top_exp();
      p.cut = t.tcut_ + o.top_exp();
      std::vector<QVec> g = t.tail_cone_.qgens();
      for (auto& v : o.hull_cone().qgens()) g.push_back(v);
      p.cone = Cone(2, g);
      return p;
    };
    Part pa = part(a, b), pb = part(b, a);
    auto unsafe = [&](const Part& p, const QExp& e) {
      if (!p.active) return false;
      if (w.cmp(e, p.cut) >= 0) return false;
      QExp d = e - p.anchor;
      return p.cone.contains(qvec2(d[0], d[1]));
    };
    std::vector<PTerm> keep;
    for (auto& [e, c] : prod.terms())
      if (!unsafe(pa, e) && !unsafe(pb, e)) keep.push_back({e, c});
    QExp cutv = !pa.active ? pb.cut
                : !pb.active ? pa.cut
                : w.cmp(pa.cut, pb.cut) >= 0 ? pa.cut : pb.cut;
    QExp v = !pa.active ? pb.anchor
             : !pb.active ? pa.anchor
             : w.cmp(pa.anchor, pb.anchor) >= 0 ? pa.anchor : pb.anchor;
    std::vector<QVec> g;
    auto absorb = [&](const Part& p) {
      if (!p.active) return;
      QExp d = p.anchor - v;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
      for (auto& c : p.cone.qgens()) g.push_back(c);
    };
    absorb(pa);
    absorb(pb);
    PuiseuxEncoding r = with_tail(w, std::move(keep), v, Cone(2, g), cutv);
    // supp(a*b) is bounded by the Minkowski sum of the operand hull cones
    std::vector<QVec> hg = a.hull_cone().qgens();
    for (auto& x : b.hull_cone().qgens()) hg.push_back(x);
    r.set_hull_override(Cone(2, hg));
    return r;
  }

  PuiseuxEncoding shifted_scaled(const QExp& e, const Quad& c) const {
    if (c.is_zero()) return exact(ord_, {});
    PuiseuxEncoding r = *this;
    for (auto& t : r.terms_) {
      t.e = t.e + e;
      t.c = t.c * c;
    }
    if (!exact_) {
      r.tail_vertex_ = r.tail_vertex_ + e;
      r.tcut_ = r.tcut_ + e;
    }
    return r;
  }

  PuiseuxEncoding pow(int n) const {
    PuiseuxEncoding r = exact(ord_, {PTerm{{Rat(0), Rat(0)}, Quad(1)}});
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
  }

  static PuiseuxEncoding from_qpoly_exact(const OrderWeight& w, const QPoly& p) {
    std::vector<PTerm> t;
    for (auto& [e, c] : p.terms()) t.push_back({e, c});
    return exact(w, std::move(t));
  }

 private:
  const OrderWeight& pick_order(const PuiseuxEncoding& b) const {
    auto same = [](const OrderWeight& x, const OrderWeight& y) {
      if (x.quad_form != y.quad_form) return false;
      if (x.quad_form) return x.w1 == y.w1 && x.w2 == y.w2;
      return x.stages == y.stages;
    };
    if (!same(ord_, b.ord_))
      throw EngineError(ErrKind::OrderMismatch, "encodings carry different orders");
    return ord_;
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [&](const PTerm& x, const PTerm& y) { return ord_.cmp(x.e, y.e) > 0; });
    for (size_t i = 0; i + 1 < terms_.size(); ++i)
      if (ord_.cmp(terms_[i].e, terms_[i + 1].e) == 0)
        throw EngineError(ErrKind::PreconditionViolated, "duplicate exponent in encoding");
  }

  void check_tail() {
    if (exact_) return;
    QExp zero{Rat(0), Rat(0)};
    for (auto& gen : tail_cone_.gens()) {
      QExp g{Rat(gen[0]), Rat(gen[1])};
      if (ord_.cmp(g, zero) > 0)
        throw EngineError(ErrKind::PreconditionViolated, "tail cone not order-negative");
    }
    if (!is_strictly_convex(tail_cone_))
      throw EngineError(ErrKind::PreconditionViolated, "tail cone not strictly convex");
  }

  OrderWeight ord_;
  std::vector<PTerm> terms_;
  bool exact_ = true;
  QExp tail_vertex_{Rat(0), Rat(0)};
  Cone tail_cone_{2};
  QExp tcut_{Rat(0), Rat(0)};
  std::optional<Cone> hull_;
};

// ---------------------------------------------------------------------------
// expansion of rational functions p/q in x,y (Laurent allowed)

inline PuiseuxEncoding expand_laurent_ratio(const Poly& num, const Poly& den,
                                            const OrderWeight& w, int nterms) {
  if (den.is_zero()) throw EngineError(ErrKind::DivisionByZero, "expansion of p/0");
  if (nterms < 1) throw EngineError(ErrKind::PreconditionViolated, "nterms must be positive");
  if (num.is_zero()) return PuiseuxEncoding::exact(w, {});
  QPoly p = QPoly::from_poly(num), q = QPoly::from_poly(den);
  auto [qe, qc] = q.lt(w);
  std::vector<PTerm> terms;
  QPoly r = p;
  for (int i = 0; i < nterms && !r.is_zero(); ++i) {
    auto [re, rc] = r.lt(w);
    QExp te = re - qe;
    Quad tc = rc / qc;
    terms.push_back({te, tc});
    r = r - q.shifted_scaled(te, tc);
  }
  if (r.is_zero()) return PuiseuxEncoding::exact(w, std::move(terms));
  QExp v = r.lt(w).first - qe;  // exponent of the next series term
  QExp cut = terms.back().e;
  std::vector<QVec> g;
  auto diffs = [&](const QPoly& s) {
    QExp anchor = s.lt(w).first;
    for (auto& [e, c] : s.terms()) {
      QExp d = e - anchor;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
    }
  };
  diffs(q);
  diffs(r);
  PuiseuxEncoding out =
      PuiseuxEncoding::with_tail(w, std::move(terms), v, Cone(2, g), cut);
  // whole-series support bound: lead + cone of the numerator and denominator
  // support differences (every series term is a numerator exponent plus a
  // sum of denominator differences, relative to lt(q))
  std::vector<QVec> hg;
  auto hdiffs = [&](const QPoly& s) {
    QExp anchor = s.lt(w).first;
    for (auto& [e, c] : s.terms()) {
      QExp d = e - anchor;
      if (d[0] != 0 || d[1] != 0) hg.push_back(qvec2(d[0], d[1]));
    }
  };
  hdiffs(p);
  hdiffs(q);
  out.set_hull_override(Cone(2, hg));
  return out;
}

inline PuiseuxEncoding expand_ratfun(const RatFun& r, const OrderWeight& w, int nterms) {
  if (r.depends_on(2))
    throw EngineError(ErrKind::PreconditionViolated, "series expansion with t present");
  return expand_laurent_ratio(r.num(), r.den(), w, nterms);
}

// q(phi) for a polynomial q over Q(x,y), by Horner evaluation
inline PuiseuxEncoding apply_poly(const UPoly<RatFun>& q, const PuiseuxEncoding& phi,
                                  int nterms) {
  const OrderWeight& w = phi.order();
  PuiseuxEncoding acc = PuiseuxEncoding::exact(w, {});
  for (int i = q.deg(); i >= 0; --i) {
    acc = acc * phi;
    if (!q.coeff(i).is_zero()) acc = acc + expand_ratfun(q.coeff(i), w, nterms);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// support vertices: exponents that are vertices of the convex hull of the
// support estimate (listed points plus the tail region), each paired with a
// cone such that the union of the shifted cones covers the whole estimate

inline SupportEstimate support_vertices(const PuiseuxEncoding& e) {
  SupportEstimate se;
  if (e.is_zero()) return se;
  if (!e.is_exact()) {
    // with a tail region present, the sharpest sound single-vertex estimate
    // anchors the hull bound at the top of the support estimate
    se.vertices.push_back({e.top_exp(), e.hull_cone()});
    return se;
  }
  const auto& terms = e.terms();
  size_t n = terms.size();
  for (size_t i = 0; i < n; ++i) {
    std::vector<QExp> pts;
    for (size_t j = 0; j < n; ++j)
      if (j != i) pts.push_back(terms[j].e);
    int m = (int)pts.size();
    if (m == 0) {
      se.vertices.push_back({terms[i].e, Cone(2)});
      continue;
    }
    // vertex test: infeasibility of a convex combination of the other points
    std::vector<LinCon> cons;
    for (int coord = 0; coord < 2; ++coord) {
      LinCon c;
      c.a.assign(m, Rat(0));
      for (int j = 0; j < m; ++j) c.a[j] = pts[j][coord];
      c.rel = Rel::EQ;
      c.b = terms[i].e[coord];
      cons.push_back(c);
    }
    LinCon s;
    s.a.assign(m, Rat(1));
    s.rel = Rel::EQ;
    s.b = 1;
    cons.push_back(s);
    for (int v = 0; v < m; ++v) {
      LinCon p;
      p.a.assign(m, Rat(0));
      p.a[v] = -1;
      p.rel = Rel::LE;
      p.b = 0;
      cons.push_back(p);
    }
    if (fm_feasible(cons, m)) continue;  // not a vertex
    std::vector<QVec> g;
    for (int j = 0; j < m; ++j) {
      QExp d = pts[j] - terms[i].e;
      if (d[0] != 0 || d[1] != 0) g.push_back(qvec2(d[0], d[1]));
    }
    se.vertices.push_back({terms[i].e, Cone(2, g)});
  }
  return se;
}

// ---------------------------------------------------------------------------
// Newton-Puiseux algorithm

struct NewtonOptions {
  int kmin = 1;
  long ram_bound = 64;
  int max_steps = 48;
};

namespace detail {

using QUPoly = std::vector<QPoly>;  // coefficients of Z^0, Z^1, ...

inline void qu_trim(QUPoly& q) {
  while (!q.empty() && q.back().is_zero()) q.pop_back();
}

// nonzero roots with multiplicities of a face polynomial over Quad scalars;
// at most one quadratic extension of Q is available
inline std::vector<std::pair<Quad, int>> face_roots(std::vector<Quad> f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  size_t lo = 0;
  while (lo < f.size() && f[lo].is_zero()) ++lo;
  f.erase(f.begin(), f.begin() + lo);  // drop zero roots
  auto deg = [&]() { return (int)f.size() - 1; };
  std::vector<std::pair<Quad, int>> roots;
  auto deflate = [&](const Quad& r) {
    std::vector<Quad> q(deg(), Quad(0));
    Quad carry = f.back();
    for (int i = deg() - 1; i >= 0; --i) {
      q[i] = carry;
      carry = f[i] + carry * r;
    }
    if (!carry.is_zero()) return false;
    f = std::move(q);
    return true;
  };
  auto add_root = [&](const Quad& r) {
    int mult = 0;
    while (deg() >= 1 && deflate(r)) ++mult;
    if (mult > 0) roots.push_back({r, mult});
  };
  bool all_rat = true;
  for (auto& c : f)
    if (!c.is_rational()) all_rat = false;
  if (all_rat && deg() >= 3) {
    // rational-root search on the integer-scaled polynomial
    Int den_l = 1;
    for (auto& c : f) mpz_lcm(den_l.get_mpz_t(), den_l.get_mpz_t(), c.a.get_den().get_mpz_t());
    std::vector<Int> zc;
    for (auto& c : f) zc.push_back(Rat(c.a * Rat(den_l)).get_num());
    auto divisors = [](Int n) {
      std::vector<Int> d;
      if (n < 0) n = -n;
      for (Int i = 1; i * i <= n && i < 100000; ++i)
        if (mpz_divisible_p(n.get_mpz_t(), i.get_mpz_t())) {
          d.push_back(i);
          d.push_back(n / i);
        }
      return d;
    };
    auto dnum = divisors(zc.front()), dden = divisors(zc.back());
    for (auto& p : dnum) {
      if (deg() <= 2) break;
      for (auto& q : dden) {
        Rat cand(p, q);
        cand.canonicalize();
        add_root(Quad(cand));
        add_root(Quad(-cand));
        if (deg() <= 2) break;
      }
    }
  }
  if (deg() == 1) {
    roots.push_back({-f[0] / f[1], 1});
  } else if (deg() == 2) {
    Quad disc = f[1] * f[1] - Quad(4) * f[2] * f[0];
    std::optional<Quad> sq;
    if (disc.is_rational()) {
      if (sgn(disc.a) >= 0) {
        if (auto r = rat_sqrt(disc.a)) {
          sq = Quad(*r);
        } else {
          // sqrt(p/q) = sqrt(p*q)/q; adjoin the squarefree part
          Int pq = disc.a.get_num() * disc.a.get_den();
          auto [s, rr] = squarefree_decompose(pq);
          if (!s.fits_slong_p())
            throw EngineError(ErrKind::ResourceExhausted, "radicand too large");
          sq = Quad(Rat(0), Rat(rr) / Rat(disc.a.get_den()), s.get_si());
        }
      }
    } else {
      sq = disc.sqrt_same_field();
    }
    if (!sq)
      throw EngineError(ErrKind::ResourceExhausted,
                        "initial coefficient outside a single real quadratic extension");
    Quad two_a = Quad(2) * f[2];
    if (sq->is_zero()) {
      roots.push_back({-f[1] / two_a, 2});
    } else {
      roots.push_back({(-f[1] + *sq) / two_a, 1});
      roots.push_back({(-f[1] - *sq) / two_a, 1});
    }
  } else if (deg() >= 3) {
    throw EngineError(ErrKind::ResourceExhausted, "face polynomial of degree > 2 remains");
  }
  return roots;
}

struct NewtonWorker {
  const OrderWeight& w;
  const NewtonOptions& opt;
  std::vector<PuiseuxEncoding> out;

  // substitute Z -> c * x^gamma + Z
  static QUPoly substitute(const QUPoly& q, const QExp& gamma, const Quad& c) {
    int n = (int)q.size();
    QUPoly b(n);
    std::vector<QPoly> pw(n);  // (c x^gamma)^m
    pw[0] = QPoly(Quad(1));
    for (int m = 1; m < n; ++m) pw[m] = pw[m - 1].shifted_scaled(gamma, c);
    for (int e = 0; e < n; ++e) {
      for (int d = e; d < n; ++d) {
        if (q[d].is_zero()) continue;
        Int bi;
        mpz_bin_uiui(bi.get_mpz_t(), d, e);
        b[e] = b[e] + (q[d] * pw[d - e]).shifted_scaled({Rat(0), Rat(0)}, Quad(Rat(bi)));
      }
    }
    qu_trim(b);
    return b;
  }

  // nroots = number of series roots of q whose next exponent is strictly
  // below `bound` (all roots at the top level); roots that drifted in from
  // sibling branches sit at or above the bound and are never expanded here
  void run(QUPoly q, std::vector<PTerm> acc, std::optional<QExp> bound, int nroots, int steps) {
    qu_trim(q);
    if (nroots <= 0) return;
    if (steps > opt.max_steps)
      throw EngineError(ErrKind::ResourceExhausted, "series expansion step budget exceeded");
    if (q.empty())
      throw EngineError(ErrKind::PreconditionViolated, "zero polynomial in series expansion");
    if (q[0].is_zero()) {
      // the accumulated terms form an exact root
      out.push_back(PuiseuxEncoding::exact(w, acc));
      --nroots;
      q.erase(q.begin());
      qu_trim(q);
      if (nroots == 0) return;
      if (q.empty() || q[0].is_zero())
        throw EngineError(ErrKind::NotSquarefree, "repeated series root");
    }
    if ((int)q.size() == 1) return;

    // regular case: a single root remains in this branch and the lowest edge
    // dominates -> certify the tail instead of expanding further
    if (nroots == 1 && !acc.empty() && (int)acc.size() >= opt.kmin &&
        try_finish(q, acc, bound))
      return;

    int n = (int)q.size();
    std::vector<QExp> cands;
    for (int d1 = 0; d1 < n; ++d1) {
      if (q[d1].is_zero()) continue;
      for (int d2 = d1 + 1; d2 < n; ++d2) {
        if (q[d2].is_zero()) continue;
        QExp e1 = q[d1].lt(w).first, e2 = q[d2].lt(w).first;
        QExp gamma{(e1[0] - e2[0]) / Rat(d2 - d1), (e1[1] - e2[1]) / Rat(d2 - d1)};
        bool dup = false;
        for (auto& c : cands)
          if (c == gamma) dup = true;
        if (!dup) cands.push_back(gamma);
      }
    }
    std::sort(cands.begin(), cands.end(),
              [&](const QExp& a, const QExp& b) { return w.cmp(a, b) > 0; });
    for (auto& gamma : cands) {
      if (bound && w.cmp(gamma, *bound) >= 0) continue;
      // face of the Newton polygon at slope gamma: indices maximizing the
      // order-value of lt(q_d) * Z^d after Z -> x^gamma
      std::vector<int> face;
      std::optional<QExp> best;
      for (int d = 0; d < n; ++d) {
        if (q[d].is_zero()) continue;
        QExp e = q[d].lt(w).first;
        QExp v{e[0] + Rat(d) * gamma[0], e[1] + Rat(d) * gamma[1]};
        int c = best ? w.cmp(v, *best) : 1;
        if (c > 0) {
          best = v;
          face.assign(1, d);
        } else if (c == 0) {
          face.push_back(d);
        }
      }
      if (face.size() < 2) continue;  // not an edge
      std::vector<Quad> fp(n, Quad(0));
      for (int d : face) fp[d] = q[d].lt(w).second;
      for (auto& [c, mult] : face_roots(fp)) {
        check_ramification(gamma);
        std::vector<PTerm> acc2 = acc;
        acc2.push_back({gamma, c});
        run(substitute(q, gamma, c), std::move(acc2), gamma, mult, steps + 1);
      }
    }
  }

  void check_ramification(const QExp& gamma) const {
    Int l;
    mpz_lcm(l.get_mpz_t(), gamma[0].get_den().get_mpz_t(), gamma[1].get_den().get_mpz_t());
    if (!l.fits_slong_p() || l.get_si() > opt.ram_bound)
      throw EngineError(ErrKind::RamificationOverflow, "ramification bound exceeded");
  }

  // tail certificate for the unique remaining in-branch root.
  //
  // Preferred region (anchored at the branch lead gamma1): let M be the
  // order-maximal exponent among e + d*gamma1 over all terms e of q_d. If M
  // is attained by a term of q_1 and by no term of q_0, then rewriting the
  // remaining root as x^gamma1 * psi gives psi = G(psi) with
  //   G(psi) = -(A_0 + sum_{d>=2} A_d psi^d) / A_1,
  // where A_d = q_d x^{d*gamma1 - M} has support in C = cone of the
  // value differences, A_1 is a unit with A_1/lc - 1 supported in C\{0},
  // and A_0 is supported in C\{0}. G contracts on series supported in C
  // with order-negative exponents, so supp(root) - gamma1 lies in C.
  //
  // Fallback region (anchored at the next exponent beta = lt(q0) - lt(q1)):
  // the same fixed-point argument at slope beta with C built from the
  // differences e + d*beta - lt(q0); valid when the (0,1) edge dominates.
  bool try_finish(const QUPoly& q, const std::vector<PTerm>& acc,
                  const std::optional<QExp>& bound) {
    if (q.size() < 2 || q[0].is_zero() || q[1].is_zero()) return false;
    QExp l0 = q[0].lt(w).first, l1 = q[1].lt(w).first;
    QExp beta = l0 - l1;
    if (bound && w.cmp(beta, *bound) >= 0) return false;
    QExp zero{Rat(0), Rat(0)};

    // fallback data must be valid in any case (it also certifies that the
    // branch is regular)
    std::vector<QVec> fg;
    for (int d = 0; d < (int)q.size(); ++d) {
      for (auto& [e, c] : q[d].terms()) {
        QExp diff{e[0] + Rat(d) * beta[0] - l0[0], e[1] + Rat(d) * beta[1] - l0[1]};
        if (diff[0] == 0 && diff[1] == 0) continue;
        if (w.cmp(diff, zero) > 0) return false;  // edge not dominant yet
        fg.push_back(qvec2(diff[0], diff[1]));
      }
    }

    const QExp gamma1 = acc.front().e;
    const QExp cut = acc.back().e;

    // preferred region: value differences at slope gamma1
    std::optional<QExp> M;
    for (int d = 0; d < (int)q.size(); ++d)
      for (auto& [e, c] : q[d].terms()) {
        QExp v{e[0] + Rat(d) * gamma1[0], e[1] + Rat(d) * gamma1[1]};
        if (!M || w.cmp(v, *M) > 0) M = v;
      }
    bool unit_in_q1 = false, max_in_q0 = false;
    std::vector<QVec> pg;
    for (int d = 0; d < (int)q.size(); ++d)
      for (auto& [e, c] : q[d].terms()) {
        QExp diff{e[0] + Rat(d) * gamma1[0] - (*M)[0], e[1] + Rat(d) * gamma1[1] - (*M)[1]};
        if (diff[0] == 0 && diff[1] == 0) {
          if (d == 1) unit_in_q1 = true;
          if (d == 0) max_in_q0 = true;
        } else {
          pg.push_back(qvec2(diff[0], diff[1]));
        }
      }
    if (unit_in_q1 && !max_in_q0) {
      out.push_back(PuiseuxEncoding::with_tail(w, acc, gamma1, Cone(2, pg), cut));
    } else {
      out.push_back(PuiseuxEncoding::with_tail(w, acc, beta, Cone(2, fg), cut));
    }
    return true;
  }
};

}  // namespace detail

// all series roots of a squarefree polynomial p(Z) over Q(x,y), as finite
// encodings with certified tails
inline std::vector<PuiseuxEncoding> newton_puiseux(const UPoly<RatFun>& p, const OrderWeight& w,
                                                   const NewtonOptions& opt = {}) {
  if (p.deg() < 1)
    throw EngineError(ErrKind::PreconditionViolated, "constant polynomial has no series roots");
  if (gcd_upoly(p, p.derivative()).deg() != 0)
    throw EngineError(ErrKind::NotSquarefree, "series expansion input not squarefree");
  // clear coefficient denominators: the roots are unchanged
  Poly den(1);
  for (int i = 0; i <= p.deg(); ++i)
    if (!p.coeff(i).is_zero())
      den = den * divide_exact(p.coeff(i).den(), gcd_poly(den, p.coeff(i).den()));
  detail::QUPoly q;
  for (int i = 0; i <= p.deg(); ++i) {
    RatFun c = p.coeff(i) * RatFun(den);
    if (!c.is_poly())
      throw EngineError(ErrKind::PreconditionViolated, "denominator clearing failed");
    q.push_back(QPoly::from_poly(c.num()));
  }
  detail::NewtonWorker worker{w, opt, {}};
  worker.run(q, {}, std::nullopt, p.deg(), 0);
  std::sort(worker.out.begin(), worker.out.end(),
            [&](const PuiseuxEncoding& a, const PuiseuxEncoding& b) {
              if (a.is_zero() || b.is_zero()) return b.is_zero() && !a.is_zero();
              int c = w.cmp(a.lead().e, b.lead().e);
              if (c != 0) return c > 0;
              return (a.lead().c - b.lead().c).sign() > 0;
            });
  return worker.out;
}

// ---------------------------------------------------------------------------
// positive part of a rational expression in Q[x,y,xbar,ybar][[t]]

// slices F_0..F_N of r = p/q as a power series in t; requires the t-constant
// part of q to be a single monomial (then truncation at every order is exact)
inline std::vector<Poly> t_slices(const RatFun& r, int N) {
  auto split = [](const Poly& p) {
    std::map<int, Poly> s;
    for (auto& [e, c] : p.terms()) s[e[2]].add_term({e[0], e[1], 0}, c);
    return s;
  };
  auto ns = split(r.num()), ds = split(r.den());
  if (ds.empty()) throw EngineError(ErrKind::DivisionByZero, "series expansion of p/0");
  int dmin = ds.begin()->first;
  // normalize so the denominator starts at t^0; the numerator must then
  // contain no negative t powers
  std::map<int, Poly> num, den;
  for (auto& [k, p] : ns) {
    if (k - dmin < 0)
      throw EngineError(ErrKind::PreconditionViolated, "negative t powers in series");
    num[k - dmin] = p;
  }
  for (auto& [k, p] : ds) den[k - dmin] = p;
  const Poly& d0 = den[0];
  if (!d0.is_monomial())
    throw EngineError(ErrKind::UncertifiedTail,
                      "t-constant denominator part is not a monomial");
  auto [d0e, d0c] = *d0.terms().begin();
  Poly d0inv = Poly::monomial(Rat(1) / d0c, {-d0e[0], -d0e[1], 0});
  std::vector<Poly> f(N + 1);
  for (int n = 0; n <= N; ++n) {
    Poly acc = num.count(n) ? num[n] : Poly();
    for (int j = 1; j <= n; ++j)
      if (den.count(j)) acc = acc - den[j] * f[n - j];
    f[n] = acc * d0inv;
  }
  return f;
}

// keep only exponents in the chosen orthant: strictly positive powers of x
// and y when strict, non-negative powers otherwise; exact up to t^N
inline Poly positive_part(const RatFun& r, int N, bool strict) {
  auto f = t_slices(r, N);
  Poly out;
  int lo = strict ? 1 : 0;
  for (int n = 0; n <= N; ++n)
    for (auto& [e, c] : f[n].terms())
      if (e[0] >= lo && e[1] >= lo) out.add_term({e[0], e[1], n}, c);
  return out;
}

}  // namespace osum
