#pragma once

// Exact rational polyhedral cones in R^2 and R^3, additive total orders on
// Q^2, Fourier-Motzkin feasibility, duals, and the support cone of a series
// composition.

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "osum/errors.hpp"
#include "osum/rat.hpp"

namespace osum {

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;

inline QVec qvec2(Rat a, Rat b) { return {std::move(a), std::move(b)}; }
inline QVec qvec3(Rat a, Rat b, Rat c) { return {std::move(a), std::move(b), std::move(c)}; }

// ---------------------------------------------------------------------------
// linear constraints and Fourier-Motzkin elimination

enum class Rel { EQ, LE, LT };

struct LinCon {
  QVec a;
  Rel rel;
  Rat b;  // a . x  (rel)  b
};

namespace detail {

inline bool con_trivial(const LinCon& c) {
  for (auto& v : c.a)
    if (v != 0) return false;
  switch (c.rel) {
    case Rel::EQ: return c.b == 0;
    case Rel::LE: return c.b >= 0;
    case Rel::LT: return c.b > 0;
  }
  return false;
}
inline bool con_varfree(const LinCon& c) {
  for (auto& v : c.a)
    if (v != 0) return false;
  return true;
}

}  // namespace detail

// exact feasibility of a system of rational linear constraints
inline bool fm_feasible(std::vector<LinCon> cons, int nvars) {
  for (int k = nvars - 1; k >= 0; --k) {
    // substitute using an equality involving x_k if one exists
    int eq = -1;
    for (size_t i = 0; i < cons.size(); ++i)
      if (cons[i].rel == Rel::EQ && cons[i].a[k] != 0) { eq = (int)i; break; }
    std::vector<LinCon> next;
    if (eq >= 0) {
      LinCon e = cons[eq];
      for (size_t i = 0; i < cons.size(); ++i) {
        if ((int)i == eq) continue;
        LinCon c = cons[i];
        if (c.a[k] != 0) {
          Rat f = c.a[k] / e.a[k];
          for (int j = 0; j < nvars; ++j) c.a[j] -= f * e.a[j];
          c.b -= f * e.b;
        }
        if (detail::con_varfree(c)) {
          if (!detail::con_trivial(c)) return false;
        } else {
          next.push_back(std::move(c));
        }
      }
    } else {
      std::vector<size_t> up, lo, other;
      for (size_t i = 0; i < cons.size(); ++i) {
        if (cons[i].a[k] > 0) up.push_back(i);
        else if (cons[i].a[k] < 0) lo.push_back(i);
        else other.push_back(i);
      }
      for (auto i : other) next.push_back(cons[i]);
      for (auto iu : up)
        for (auto il : lo) {
          const LinCon &u = cons[iu], &l = cons[il];
          LinCon c;
          c.a.assign(nvars, Rat(0));
          Rat fu = -l.a[k], fl = u.a[k];  // both positive multipliers
          for (int j = 0; j < nvars; ++j) c.a[j] = fu * u.a[j] + fl * l.a[j];
          c.b = fu * u.b + fl * l.b;
          c.rel = (u.rel == Rel::LT || l.rel == Rel::LT) ? Rel::LT : Rel::LE;
          if (detail::con_varfree(c)) {
            if (!detail::con_trivial(c)) return false;
          } else {
            next.push_back(std::move(c));
          }
        }
    }
    // dedupe exact duplicates to control growth
    std::sort(next.begin(), next.end(), [](const LinCon& x, const LinCon& y) {
      if (x.rel != y.rel) return (int)x.rel < (int)y.rel;
      if (x.b != y.b) return x.b < y.b;
      return std::lexicographical_compare(x.a.begin(), x.a.end(), y.a.begin(), y.a.end(),
                                          [](const Rat& p, const Rat& q) { return p < q; });
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const LinCon& x, const LinCon& y) {
                             return x.rel == y.rel && x.b == y.b && x.a == y.a;
                           }),
               next.end());
    cons = std::move(next);
  }
  for (auto& c : cons)
    if (!detail::con_trivial(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// cones by primitive integer generators

inline ZVec primitive_vector(const QVec& v) {
  Int l = 1;
  for (auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  ZVec z;
  Int g = 0;
  for (auto& q : v) {
    Rat s = q * Rat(l);
    z.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
  }
  if (g > 1)
    for (auto& x : z) x /= g;
  return z;
}

inline QVec to_qvec(const ZVec& z) {
  QVec q;
  for (auto& x : z) q.push_back(Rat(x));
  return q;
}

class Cone {
 public:
  explicit Cone(int dim = 2) : dim_(dim) {}
  Cone(int dim, std::vector<QVec> gens) : dim_(dim) {
    for (auto& g : gens) add_raw(g);
    canonicalize();
  }
  static Cone from_int(int dim, std::vector<std::vector<long>> gens) {
    std::vector<QVec> q;
    for (auto& g : gens) {
      QVec v;
      for (auto x : g) v.push_back(Rat(x));
      q.push_back(v);
    }
    return Cone(dim, q);
  }

  int dim() const { return dim_; }
  const std::vector<ZVec>& gens() const { return gens_; }
  bool is_zero() const { return gens_.empty(); }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.dim_ == b.dim_ && a.gens_ == b.gens_;
  }
  friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }

  // membership of a rational point in the cone, by conic Caratheodory:
  // p is in the cone iff it is a non-negative combination of at most dim
  // linearly independent generators
  bool contains(const QVec& p) const {
    bool zero = true;
    for (auto& x : p)
      if (x != 0) zero = false;
    if (zero) return true;
    int n = (int)gens_.size();
    std::vector<int> sel;
    return contains_rec(p, 0, sel, n);
  }

  bool contains_cone(const Cone& c) const {
    for (auto& g : c.gens_)
      if (!contains(to_qvec(g))) return false;
    return true;
  }

  std::vector<QVec> qgens() const {
    std::vector<QVec> r;
    for (auto& g : gens_) r.push_back(to_qvec(g));
    return r;
  }

 private:
  bool contains_rec(const QVec& p, int start, std::vector<int>& sel, int n) const {
    if (!sel.empty() && solvable_nonneg(p, sel)) return true;
    if ((int)sel.size() == dim_) return false;
    for (int i = start; i < n; ++i) {
      sel.push_back(i);
      if (contains_rec(p, i + 1, sel, n)) {
        sel.pop_back();
        return true;
      }
      sel.pop_back();
    }
    return false;
  }

  // unique solve of sum nu_i g_{sel_i} = p with nu >= 0, for independent cols
  bool solvable_nonneg(const QVec& p, const std::vector<int>& sel) const {
    int k = (int)sel.size();
    // Gaussian elimination on the dim x (k+1) augmented matrix
    std::vector<QVec> m(dim_, QVec(k + 1, Rat(0)));
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < k; ++c) m[r][c] = Rat(gens_[sel[c]][r]);
      m[r][k] = p[r];
    }
    int row = 0;
    std::vector<int> pivot_row(k, -1);
    for (int c = 0; c < k && row < dim_; ++c) {
      int pr = -1;
      for (int r = row; r < dim_; ++r)
        if (m[r][c] != 0) { pr = r; break; }
      if (pr < 0) return false;  // dependent columns: a smaller subset covers
      std::swap(m[pr], m[row]);
      for (int r = 0; r < dim_; ++r) {
        if (r == row || m[r][c] == 0) continue;
        Rat f = m[r][c] / m[row][c];
        for (int cc = c; cc <= k; ++cc) m[r][cc] -= f * m[row][cc];
      }
      pivot_row[c] = row;
      ++row;
    }
    for (int r = row; r < dim_; ++r)
      if (m[r][k] != 0) return false;  // inconsistent
    for (int c = 0; c < k; ++c) {
      Rat nu = m[pivot_row[c]][k] / m[pivot_row[c]][c];
      if (nu < 0) return false;
    }
    return true;
  }

  void add_raw(const QVec& v) {
    bool zero = true;
    for (auto& x : v)
      if (x != 0) zero = false;
    if (!zero) gens_.push_back(primitive_vector(v));
  }

  void canonicalize() {
    std::sort(gens_.begin(), gens_.end());
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
    // drop generators that are non-negative combinations of the others
    for (size_t i = gens_.size(); i-- > 0;) {
      Cone rest(dim_);
      for (size_t j = 0; j < gens_.size(); ++j)
        if (j != i) rest.gens_.push_back(gens_[j]);
      rest.dim_ = dim_;
      if (rest.contains(to_qvec(gens_[i]))) gens_.erase(gens_.begin() + i);
    }
    std::sort(gens_.begin(), gens_.end());
  }

  int dim_;
  std::vector<ZVec> gens_;
};

inline Cone cone_hull(const Cone& a, const Cone& b) {
  std::vector<QVec> g = a.qgens();
  for (auto& v : b.qgens()) g.push_back(v);
  return Cone(a.dim(), g);
}

// strictly convex iff C meets -C only at 0: infeasibility of
// sum nu_i g_i = 0, sum nu_i = 1, nu >= 0
inline bool is_strictly_convex(const Cone& c) {
  int n = (int)c.gens().size();
  if (n == 0) return true;
  std::vector<LinCon> cons;
  for (int d = 0; d < c.dim(); ++d) {
    LinCon e;
    e.a.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) e.a[i] = Rat(c.gens()[i][d]);
    e.rel = Rel::EQ;
    e.b = 0;
    cons.push_back(e);
  }
  LinCon s;
  s.a.assign(n, Rat(1));
  s.rel = Rel::EQ;
  s.b = 1;
  cons.push_back(s);
  for (int i = 0; i < n; ++i) {
    LinCon p;
    p.a.assign(n, Rat(0));
    p.a[i] = -1;
    p.rel = Rel::LE;
    p.b = 0;
    cons.push_back(p);
  }
  return !fm_feasible(cons, n);
}

// dual cone {u : <u, g> <= 0 for all generators g} by double description
inline Cone cone_dual(const Cone& c) {
  int d = c.dim();
  // start from all of R^d
  std::vector<QVec> rays;
  for (int i = 0; i < d; ++i) {
    QVec p(d, Rat(0)), m(d, Rat(0));
    p[i] = 1;
    m[i] = -1;
    rays.push_back(p);
    rays.push_back(m);
  }
  auto dot = [&](const QVec& u, const ZVec& v) {
    Rat s = 0;
    for (int i = 0; i < d; ++i) s += u[i] * Rat(v[i]);
    return s;
  };
  for (auto& g : c.gens()) {
    std::vector<QVec> keep, pos, neg;
    for (auto& r : rays) {
      Rat s = dot(r, g);
      if (s <= 0) keep.push_back(r);
      if (s > 0) pos.push_back(r);
      if (s < 0) neg.push_back(r);
    }
    for (auto& p : pos)
      for (auto& q : neg) {
        Rat sp = dot(p, g), sq = dot(q, g);
        QVec comb(d, Rat(0));
        bool zero = true;
        for (int i = 0; i < d; ++i) {
          comb[i] = sp * q[i] - sq * p[i];
          if (comb[i] != 0) zero = false;
        }
        if (!zero) keep.push_back(to_qvec(primitive_vector(comb)));
      }
    // full pruning each step keeps the double description small
    rays = Cone(d, keep).qgens();
  }
  return Cone(d, rays);
}

// linear image of a cone under a dim_out x dim_in rational matrix
inline Cone cone_image(const Cone& c, const std::vector<QVec>& rows) {
  std::vector<QVec> g;
  for (auto& v : c.gens()) {
    QVec w;
    for (auto& row : rows) {
      Rat s = 0;
      for (size_t i = 0; i < row.size(); ++i) s += row[i] * Rat(v[i]);
      w.push_back(s);
    }
    g.push_back(w);
  }
  return Cone((int)rows.size(), g);
}

struct ShiftedCone {
  QVec vertex;
  Cone cone;
};

// true iff (v + C) misses {(i,j,k) : i >= 0, j >= 0} (first two coordinates
// non-negative, rest free); exact LP, lattice structure ignored
inline bool empty_meet_orthant(const ShiftedCone& sc) {
  int n = (int)sc.cone.gens().size();
  int d = (int)sc.vertex.size();
  std::vector<LinCon> cons;
  // coordinates of the point: v + sum nu_i g_i; constrain first two >= 0
  for (int coord = 0; coord < 2; ++coord) {
    LinCon c;
    c.a.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) c.a[i] = -Rat(sc.cone.gens()[i][coord]);
    c.rel = Rel::LE;
    c.b = sc.vertex[coord];
    cons.push_back(c);
  }
  (void)d;
  for (int i = 0; i < n; ++i) {
    LinCon p;
    p.a.assign(n, Rat(0));
    p.a[i] = -1;
    p.rel = Rel::LE;
    p.b = 0;
    cons.push_back(p);
  }
  return !fm_feasible(cons, n);
}

// ---------------------------------------------------------------------------
// additive total orders on Q^2

struct OrderWeight {
  bool quad_form = true;
  Quad w1, w2;                            // quad form: weight (w1, w2)
  std::vector<std::array<Rat, 2>> stages;  // stage form: lex over rational dots

  static OrderWeight quad(Quad a, Quad b) {
    // e1*a + e2*b = 0 has a rational solution iff det[[a.a, b.a],[a.b, b.b]] = 0
    if (a.a * b.b - b.a * a.b == 0)
      throw EngineError(ErrKind::PreconditionViolated,
                        "weight components linearly dependent over Q");
    OrderWeight w;
    w.quad_form = true;
    w.w1 = a;
    w.w2 = b;
    return w;
  }
  static OrderWeight stage(std::vector<std::array<Rat, 2>> us) {
    for (auto& u : us)
      if (u[0] == 0 && u[1] == 0)
        throw EngineError(ErrKind::PreconditionViolated, "zero stage vector");
    OrderWeight w;
    w.quad_form = false;
    w.stages = std::move(us);
    return w;
  }

  // exact weight value of a rational exponent vector, quad form only
  Quad value(const Rat& e1, const Rat& e2) const {
    return w1 * Quad(e1) + w2 * Quad(e2);
  }

  // -1, 0, +1 comparing e under the order
  int cmp(const std::array<Rat, 2>& x, const std::array<Rat, 2>& y) const {
    Rat d1 = x[0] - y[0], d2 = x[1] - y[1];
    if (quad_form) return (w1 * Quad(d1) + w2 * Quad(d2)).sign();
    for (auto& u : stages) {
      Rat s = u[0] * d1 + u[1] * d2;
      if (s != 0) return sgn(s);
    }
    return 0;
  }
};

inline int order_cmp(const OrderWeight& w, const std::array<Rat, 2>& a,
                     const std::array<Rat, 2>& b) {
  return w.cmp(a, b);
}

// ---------------------------------------------------------------------------
// support of a composed series (matrix columns = leading exponents lifted to
// R^3 plus the t-axis); requires C0 to meet the (x,y)-plane only at 0

inline Cone composition_support(const Cone& c0, const std::array<Rat, 2>& lead1,
                                const std::array<Rat, 2>& lead2, const Cone& tail1,
                                const Cone& tail2) {
  // precondition: C0 cap (R^2 x {0}) = {0}
  {
    int n = (int)c0.gens().size();
    std::vector<LinCon> cons;
    LinCon z;  // t-coordinate zero
    z.a.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) z.a[i] = Rat(c0.gens()[i][2]);
    z.rel = Rel::EQ;
    z.b = 0;
    cons.push_back(z);
    LinCon s;  // nontrivial combination
    s.a.assign(n, Rat(1));
    s.rel = Rel::EQ;
    s.b = 1;
    cons.push_back(s);
    for (int i = 0; i < n; ++i) {
      LinCon p;
      p.a.assign(n, Rat(0));
      p.a[i] = -1;
      p.rel = Rel::LE;
      p.b = 0;
      cons.push_back(p);
    }
    if (fm_feasible(cons, n))
      throw EngineError(ErrKind::PreconditionViolated,
                        "support cone meets the (x,y)-plane nontrivially");
  }
  std::vector<QVec> rows = {qvec3(lead1[0], lead2[0], Rat(0)),
                            qvec3(lead1[1], lead2[1], Rat(0)),
                            qvec3(Rat(0), Rat(0), Rat(1))};
  Cone img = cone_image(c0, rows);
  auto lift = [](const Cone& c2) {
    std::vector<QVec> g;
    for (auto& v : c2.gens()) g.push_back(qvec3(Rat(v[0]), Rat(v[1]), Rat(0)));
    return Cone(3, g);
  };
  Cone out = cone_hull(cone_hull(img, lift(tail1)), lift(tail2));
  if (!is_strictly_convex(out))
    throw EngineError(ErrKind::PreconditionViolated, "composed support cone not strictly convex");
  return out;
}

}  // namespace osum
