#pragma once

// Orbits of Laurent kernel polynomials as a bounded semi-algorithm, the
// substituted kernel-form equations, and the section-free basis of their
// linear combinations over the splitting field.
//
// The orbit is the closure of (x,y) under steps that fix one coordinate and
// keep the kernel value: the other coordinate then runs through the roots of
// an adjacency polynomial over the current field.  Roots are obtained by
// deflating known ones; a remaining quadratic either splits in the field or
// forces the adjunction of a square root, after which the whole search is
// restarted in the enlarged field.

#include <tuple>

#include "osum/dde.hpp"
#include "osum/field.hpp"

namespace osum {

struct OrbitElement {
  FieldElem p1, p2;
};

struct OrbitStep {
  int from = 0, to = 0;
  int fixed = 0;  // which coordinate was fixed (0 or 1)
};

struct Orbit {
  FieldPtr field;
  std::vector<OrbitElement> elems;  // elems[0] = (x, y)
  std::vector<OrbitStep> log;
  std::vector<UPoly<RatFun>> minpolys;  // adjunctions, over Q(x,y)
};

struct OrbitOptions {
  int max_size = 64;
  int max_ext_deg = 16;
  int max_restarts = 8;
  // cap on the term count of any orbit coordinate; divergent orbits grow
  // geometrically and would otherwise stall in exact arithmetic long before
  // the size budget is reached
  long max_elem_terms = 128;
};

// total number of monomials across the numerators and denominators of the
// coefficients of an element's representation
inline long elem_term_count(const FieldElem& e) {
  long n = 0;
  for (auto& c : e.rep().coeffs())
    n += (long)c.num().terms().size() + (long)c.den().terms().size();
  return n;
}

// square root of a rational function, if one exists in Q(x,y,t)
inline std::optional<RatFun> sqrt_ratfun(const RatFun& f) {
  if (f.is_zero()) return RatFun(0);
  auto s = sqrt_poly(f.num() * f.den());
  if (!s) return std::nullopt;
  return RatFun(*s, f.den());
}

// square root of a field element, if one exists in the field
inline std::optional<FieldElem> sqrt_in_field(const FieldElem& e, const FieldPtr& f) {
  if (e.is_zero()) return FieldElem(0);
  if (e.is_rational())
    if (auto s = sqrt_ratfun(e.rational_value())) return FieldElem(*s);
  if (e.is_rational() && (!f || f->trivial())) return std::nullopt;
  auto check = [&](const FieldElem& s) -> std::optional<FieldElem> {
    if (s * s == e) return s;
    return std::nullopt;
  };
  // ratio against an adjoined root: e = c^2 * r^2 with rational c
  for (size_t i = 0; i < f->rootExprs.size(); ++i) {
    FieldElem r = FieldElem::root(f, i);
    FieldElem r2 = r * r;
    if (r2.is_zero() || !r2.is_rational()) continue;
    RatFun q = FieldElem(e * FieldElem(r2.rational_value().inv())).is_rational()
                   ? (e * FieldElem(r2.rational_value().inv())).rational_value()
                   : RatFun(0);
    if (q.is_zero()) continue;
    if (auto c = sqrt_ratfun(q))
      if (auto s = check(FieldElem(*c) * r)) return s;
  }
  if (f->deg() == 2) {
    // complete the square: g = (Z + g1/2)^2 - d; solve (s0 + s1 W)^2 = e
    RatFun g1 = f->g.coeff(1), g0 = f->g.coeff(0);
    RatFun half(Poly(1), Poly(2));
    RatFun d = g1 * g1 * half * half - g0;
    RatFun e1 = e.rep().coeff(1);
    RatFun e0 = e.rep().coeff(0) - e1 * g1 * half;  // e = e0 + e1 W
    UPoly<RatFun> W(std::vector<RatFun>{g1 * half, RatFun(1)});  // W = Z + g1/2
    if (e1.is_zero()) {
      if (auto s0 = sqrt_ratfun(e0))
        if (auto s = check(FieldElem(f, UPoly<RatFun>(*s0)))) return s;
      if (!d.is_zero())
        if (auto s1 = sqrt_ratfun(e0 / d))
          if (auto s = check(FieldElem(f, W * *s1))) return s;
      return std::nullopt;
    }
    // s0*s1 = e1/2 and s0^2 + s1^2 d = e0
    if (auto B = sqrt_ratfun(e0 * e0 - d * e1 * e1)) {
      for (int sign : {1, -1}) {
        RatFun s0sq = (e0 + RatFun(sign) * *B) * half;
        auto s0 = sqrt_ratfun(s0sq);
        if (!s0 || s0->is_zero()) continue;
        RatFun s1 = e1 * half / *s0;
        if (auto s = check(FieldElem(f, W * s1 + UPoly<RatFun>(*s0)))) return s;
      }
    }
  }
  return std::nullopt;
}

namespace detail {

// evaluate a (Laurent) polynomial in x, y, t at x = u, y = v (t untouched)
class PairEval {
 public:
  PairEval(FieldElem u, FieldElem v) : u_(std::move(u)), v_(std::move(v)) {}

  FieldElem operator()(const Poly& p) {
    FieldElem acc(0);
    for (auto& [e, c] : p.terms())
      acc += FieldElem(RatFun(Poly::monomial(c, {0, 0, e[2]}))) * pw(0, e[0]) * pw(1, e[1]);
    return acc;
  }

 private:
  FieldElem pw(int var, int e) {
    auto& cache = cache_[var];
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    FieldElem r(1);
    if (e > 0) {
      FieldElem b = var == 0 ? u_ : v_;
      for (int i = 0; i < e; ++i) r *= b;
    } else if (e < 0) {
      FieldElem& inv = var == 0 ? ui_ : vi_;
      if (inv.is_zero()) inv = (var == 0 ? u_ : v_).inv();
      for (int i = 0; i < -e; ++i) r *= inv;
    }
    cache[e] = r;
    return r;
  }

  FieldElem u_, v_, ui_, vi_;
  std::map<int, FieldElem> cache_[2];
};

// adjacency polynomial: roots w of S(u, w) = value (resp. S(w, v) = value),
// as a polynomial in the moving coordinate with denominators cleared
inline UPoly<FieldElem> adjacency_poly(const Poly& S, const FieldElem& fixed, int fixed_coord,
                                       const FieldElem& value) {
  int moving = 1 - fixed_coord;
  int m = 0;
  for (auto& [e, c] : S.terms()) m = std::min(m, e[moving]);
  PairEval ev(fixed_coord == 0 ? fixed : FieldElem(0),
              fixed_coord == 0 ? FieldElem(0) : fixed);
  UPoly<FieldElem> A;
  for (auto& [e, c] : S.terms()) {
    E3 rest = e;
    int ym = rest[moving];
    rest[moving] = 0;
    FieldElem coeff = FieldElem(RatFun(Rat(c)));
    if (fixed_coord == 0)
      coeff = coeff * ev(Poly::monomial(Rat(1), {rest[0], 0, 0}));
    else
      coeff = coeff * ev(Poly::monomial(Rat(1), {0, rest[1], 0}));
    A.set_coeff(ym - m, A.coeff(ym - m) + coeff);
  }
  A.set_coeff(-m, A.coeff(-m) - value);
  return A;
}

}  // namespace detail

inline Orbit compute_orbit(const Poly& S, const OrbitOptions& opt = {}) {
  if (S.depends_on(2))
    throw EngineError(ErrKind::PreconditionViolated, "kernel polynomial must be t-free");
  if (!S.depends_on(0) || !S.depends_on(1))
    throw EngineError(ErrKind::PreconditionViolated, "kernel polynomial must involve x and y");

  std::vector<UPoly<RatFun>> minpolys;
  FieldPtr field = SplittingField::rational();

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Orbit orb;
    orb.field = field;
    orb.minpolys = minpolys;
    orb.elems.push_back({FieldElem(RatFun::var(0)), FieldElem(RatFun::var(1))});
    std::optional<UPoly<RatFun>> pending;  // adjunction request

    try {
      for (size_t cur = 0; cur < orb.elems.size() && !pending; ++cur) {
        if ((int)orb.elems.size() > opt.max_size)
          throw EngineError(ErrKind::OrbitBudgetExceeded, "orbit size budget exceeded");
        FieldElem u = orb.elems[cur].p1, v = orb.elems[cur].p2;
        detail::PairEval ev(u, v);
        FieldElem value = ev(S);
        for (int fixed = 0; fixed < 2 && !pending; ++fixed) {
          const FieldElem& fixv = fixed == 0 ? u : v;
          UPoly<FieldElem> A = detail::adjacency_poly(S, fixv, fixed, value);
          if (A.is_zero())
            throw EngineError(ErrKind::OrbitBudgetExceeded,
                              "adjacency polynomial vanishes identically");
          // deflate by the moving coordinates of known elements sharing the
          // fixed coordinate
          for (auto& el : orb.elems) {
            if (A.deg() < 1) break;
            const FieldElem& ef = fixed == 0 ? el.p1 : el.p2;
            const FieldElem& em = fixed == 0 ? el.p2 : el.p1;
            if (!(ef == fixv)) continue;
            UPoly<FieldElem> lin(std::vector<FieldElem>{-em, FieldElem(1)});
            auto [q, r] = UPoly<FieldElem>::divmod(A, lin);
            if (r.is_zero()) A = q;
          }
          std::vector<FieldElem> roots;
          if (A.deg() == 1) {
            roots.push_back(-A.coeff(0) / A.coeff(1));
          } else if (A.deg() == 2) {
            FieldElem a = A.coeff(2), b = A.coeff(1), c = A.coeff(0);
            FieldElem disc = b * b - FieldElem(4) * a * c;
            auto s = sqrt_in_field(disc, field);
            if (s) {
              FieldElem inv2a = (FieldElem(2) * a).inv();
              roots.push_back((-b + *s) * inv2a);
              roots.push_back((-b - *s) * inv2a);
            } else if (disc.is_rational()) {
              UPoly<RatFun> m;
              m.set_coeff(2, RatFun(1));
              m.set_coeff(0, -disc.rational_value());
              pending = m;
            } else {
              pending = squarefree_upoly(resultant_quadratic(field->g, disc.rep())).monic();
            }
          } else if (A.deg() >= 3) {
            throw EngineError(ErrKind::UnsupportedAdjacencyDegree,
                              "deflated adjacency polynomial has degree >= 3");
          }
          for (auto& w : roots) {
            if (w.is_zero()) continue;  // not a valid Laurent substitution point
            if (elem_term_count(w) > opt.max_elem_terms)
              throw EngineError(ErrKind::ResourceExhausted,
                                "orbit coordinate size budget exceeded");
            OrbitElement nel = fixed == 0 ? OrbitElement{fixv, w} : OrbitElement{w, fixv};
            int idx = -1;
            for (size_t i = 0; i < orb.elems.size(); ++i)
              if (orb.elems[i].p1 == nel.p1 && orb.elems[i].p2 == nel.p2) {
                idx = (int)i;
                break;
              }
            if (idx < 0) {
              orb.elems.push_back(nel);
              idx = (int)orb.elems.size() - 1;
              if ((int)orb.elems.size() > opt.max_size)
                throw EngineError(ErrKind::OrbitBudgetExceeded, "orbit size budget exceeded");
            }
            orb.log.push_back({(int)cur, idx, fixed});
          }
        }
      }
    } catch (const ZeroDivisorSplit& z) {
      field = restrict_field(field, z.split.f1);
      continue;
    }
    if (!pending) return orb;

    // adjoin and restart in the enlarged field
    long prospective = (long)std::max(field->deg(), 1) * pending->deg();
    if (prospective > opt.max_ext_deg)
      throw EngineError(ErrKind::ExtensionBudgetExceeded, "field extension degree budget exceeded");
    minpolys.push_back(*pending);
    FieldPtr bigger = normalize_quadratic(shape_split(minpolys));
    if (bigger->deg() <= field->deg() && field->deg() > 1)
      throw EngineError(ErrKind::ResourceExhausted,
                        "adjunction collapsed; root lies in the field but was not found");
    field = bigger;
  }
  throw EngineError(ErrKind::ResourceExhausted, "orbit restart budget exceeded");
}

// ---------------------------------------------------------------------------
// substituted kernel-form equations

struct OrbitEquation {
  FieldElem p1, p2;
  FieldElem rhs;  // rhs of the kernel equation at (p1, p2); t in coefficients
  struct Sec {
    SectionSpec spec;
    FieldElem arg;                        // substituted section argument
    std::map<int, FieldElem> coeff_by_t;  // t-degree -> t-free coefficient
  };
  std::vector<Sec> secs;
};

inline std::vector<OrbitEquation> orbit_equations(const KernelEquation& k, const Orbit& o) {
  std::vector<OrbitEquation> eqs;
  for (auto& el : o.elems) {
    detail::PairEval ev(el.p1, el.p2);
    OrbitEquation eq;
    eq.p1 = el.p1;
    eq.p2 = el.p2;
    eq.rhs = ev(k.rhs);
    for (auto& [coeff, spec] : k.sections) {
      OrbitEquation::Sec s;
      s.spec = spec;
      switch (spec.kind) {
        case SectionKind::XSection: s.arg = el.p1; break;
        case SectionKind::YSection: s.arg = el.p2; break;
        case SectionKind::Point: s.arg = FieldElem(0); break;
      }
      std::map<int, Poly> slices;
      for (auto& [e, c] : coeff.terms()) slices[e[2]].add_term({e[0], e[1], 0}, c);
      for (auto& [d, p] : slices) {
        FieldElem val = ev(p);
        if (!val.is_zero()) s.coeff_by_t[d] = val;
      }
      if (!s.coeff_by_t.empty()) eq.secs.push_back(std::move(s));
    }
    eqs.push_back(std::move(eq));
  }
  return eqs;
}

// ---------------------------------------------------------------------------
// section-free basis

struct OrbitSumEquation {
  // F(x,y) + sum p3 * F(p1, p2) = rhs, with the identity element implicit
  std::vector<std::tuple<FieldElem, FieldElem, FieldElem>> triples;  // (p1, p2, p3)
  FieldElem rhs;           // over Q(x,y,t)
  std::vector<FieldElem> weights;  // raw combination coefficients, one per equation
};

namespace detail {

// nullspace basis of the matrix rows x cols over the field (columns are the
// unknowns); deterministic echelon order
inline std::vector<std::vector<FieldElem>> nullspace(std::vector<std::vector<FieldElem>> m,
                                                     int ncols) {
  std::vector<int> pivot_of_col(ncols, -1);
  int row = 0;
  for (int col = 0; col < ncols && row < (int)m.size(); ++col) {
    int pr = -1;
    for (int r = row; r < (int)m.size(); ++r)
      if (!m[r][col].is_zero()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[row], m[pr]);
    FieldElem inv = m[row][col].inv();
    for (int c = col; c < ncols; ++c) m[row][c] = m[row][c] * inv;
    for (int r = 0; r < (int)m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      FieldElem f = m[r][col];
      for (int c = col; c < ncols; ++c) m[r][c] = m[r][c] - f * m[row][c];
    }
    pivot_of_col[col] = row;
    ++row;
  }
  std::vector<std::vector<FieldElem>> basis;
  for (int col = 0; col < ncols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<FieldElem> v(ncols, FieldElem(0));
    v[col] = FieldElem(1);
    for (int c = 0; c < ncols; ++c)
      if (pivot_of_col[c] >= 0) v[c] = -m[pivot_of_col[c]][col];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

// basis of linear combinations of the orbit equations with all section
// coefficients cancelled; each result is normalized so the coefficient of
// F(x,y) is 1 when possible
inline std::vector<OrbitSumEquation> section_free_basis(const KernelEquation& k, Orbit o) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      auto eqs = orbit_equations(k, o);
      int n = (int)eqs.size();
      // rows: one per (section identity, t-degree); section identities match
      // when spec and substituted argument agree
      struct Key {
        SectionSpec spec;
        FieldElem arg;
        int tdeg;
      };
      std::vector<Key> keys;
      std::vector<std::vector<FieldElem>> rows;
      auto row_for = [&](const SectionSpec& sp, const FieldElem& arg, int d) -> int {
        for (size_t i = 0; i < keys.size(); ++i) {
          auto& kk = keys[i];
          if (kk.tdeg == d && kk.spec.unknown == sp.unknown && kk.spec.kind == sp.kind &&
              kk.spec.i == sp.i && kk.spec.j == sp.j && kk.arg == arg)
            return (int)i;
        }
        keys.push_back({sp, arg, d});
        rows.emplace_back(n, FieldElem(0));
        return (int)keys.size() - 1;
      };
      for (int e = 0; e < n; ++e)
        for (auto& s : eqs[e].secs)
          for (auto& [d, c] : s.coeff_by_t) rows[row_for(s.spec, s.arg, d)][e] += c;

      auto basis = detail::nullspace(rows, n);
      Poly kernel = Poly(1) - Poly::var(2, k.r) * k.S;
      FieldElem kinv = FieldElem(RatFun(Poly(1), kernel));
      std::vector<OrbitSumEquation> out;
      for (auto& lam : basis) {
        std::vector<FieldElem> w = lam;
        if (!w[0].is_zero()) {
          FieldElem inv = w[0].inv();
          for (auto& x : w) x = x * inv;
        }
        OrbitSumEquation os;
        os.weights = w;
        FieldElem rhs(0);
        for (int e = 0; e < n; ++e) rhs += w[e] * eqs[e].rhs;
        os.rhs = rhs * kinv;
        for (int e = 1; e < n; ++e)
          if (!w[e].is_zero()) os.triples.push_back({eqs[e].p1, eqs[e].p2, w[e]});
        out.push_back(std::move(os));
      }
      // deterministic order: combinations with t-free coefficients first,
      // then by string representation
      std::sort(out.begin(), out.end(), [](const OrbitSumEquation& a, const OrbitSumEquation& b) {
        auto tfree = [](const OrbitSumEquation& q) {
          for (auto& [p1, p2, p3] : q.triples)
            for (auto& c : p3.rep().coeffs())
              if (c.depends_on(2)) return false;
          return true;
        };
        bool ta = tfree(a), tb = tfree(b);
        if (ta != tb) return ta;
        auto sa = a.rhs.str(), sb = b.rhs.str();
        return sa < sb;
      });
      return out;
    } catch (const ZeroDivisorSplit& z) {
      FieldPtr branch = restrict_field(o.field, z.split.f1);
      Orbit o2;
      o2.field = branch;
      o2.minpolys = o.minpolys;
      o2.log = o.log;
      for (auto& el : o.elems)
        o2.elems.push_back({restrict_elem(el.p1, branch), restrict_elem(el.p2, branch)});
      o = std::move(o2);
    }
  }
  throw EngineError(ErrKind::ResourceExhausted, "section-free basis split budget exceeded");
}

}  // namespace osum
