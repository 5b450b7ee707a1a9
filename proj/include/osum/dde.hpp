#pragma once

// Linear discrete differential equations over Q[x,y][[t]]: the problem
// model, the brute-force series oracle, conversion of single-unknown
// equations to kernel form, verification of user-supplied kernel forms,
// and an a-priori support cone for the solution series.

#include <string>

#include "osum/cones.hpp"
#include "osum/poly.hpp"

namespace osum {

// one summand t * coeff(x,y) * Dx^k Dy^l F_unknown on the right-hand side
struct DeltaTerm {
  Poly coeff;      // t-free polynomial in x, y
  int k = 0;       // Dx power
  int l = 0;       // Dy power
  int unknown = 0; // index of the unknown it applies to
};

// F_u = free(x,y) + t * sum of delta terms
struct DdeEquation {
  Poly free;
  std::vector<DeltaTerm> terms;
};

struct DDE {
  std::vector<std::string> unknowns;
  std::vector<DdeEquation> eqs;  // one per unknown, same order

  void validate() const {
    if (unknowns.empty() || unknowns.size() != eqs.size())
      throw EngineError(ErrKind::PreconditionViolated, "one equation per unknown required");
    for (auto& e : eqs) {
      if (e.free.depends_on(2) || e.free.is_laurent_negative())
        throw EngineError(ErrKind::PreconditionViolated, "free term must be in Q[x,y]");
      for (auto& tm : e.terms) {
        if (tm.coeff.depends_on(2) || tm.coeff.is_laurent_negative())
          throw EngineError(ErrKind::PreconditionViolated, "coefficient must be in Q[x,y]");
        if (tm.k < 0 || tm.l < 0)
          throw EngineError(ErrKind::PreconditionViolated, "negative discrete-derivative power");
        if (tm.unknown < 0 || tm.unknown >= (int)unknowns.size())
          throw EngineError(ErrKind::PreconditionViolated, "delta term references unknown out of range");
      }
    }
  }
};

// Dx^k Dy^l on a polynomial slice: keep exponents with x-power >= k and
// y-power >= l, then divide by x^k y^l
inline Poly delta_xy(const Poly& f, int k, int l) {
  Poly r;
  for (auto& [e, c] : f.terms())
    if (e[0] >= k && e[1] >= l) r.add_term({e[0] - k, e[1] - l, e[2]}, c);
  return r;
}

// exact truncations of the unique solution: per unknown, sum_{n<=N} [t^n]F t^n
inline std::vector<Poly> oracle_expand(const DDE& d, int N) {
  d.validate();
  if (N < 0) throw EngineError(ErrKind::PreconditionViolated, "negative truncation order");
  size_t m = d.unknowns.size();
  std::vector<Poly> out(m), prev(m);
  for (size_t u = 0; u < m; ++u) {
    prev[u] = d.eqs[u].free;
    out[u] = prev[u];
  }
  for (int n = 1; n <= N; ++n) {
    std::vector<Poly> cur(m);
    for (size_t u = 0; u < m; ++u) {
      Poly acc;
      for (auto& tm : d.eqs[u].terms)
        acc += tm.coeff * delta_xy(prev[tm.unknown], tm.k, tm.l);
      cur[u] = acc;
      out[u] += acc.shifted({0, 0, n});
    }
    prev = std::move(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// kernel form: (1 - t^r S) F_u = rhs + sum coeff * section

enum class SectionKind {
  XSection,  // [y^j] F: a series in x and t
  YSection,  // [x^i] F: a series in y and t
  Point,     // [x^i y^j] F: a series in t
};

struct SectionSpec {
  int unknown = 0;
  SectionKind kind = SectionKind::YSection;
  int i = 0;  // x-coefficient (YSection, Point)
  int j = 0;  // y-coefficient (XSection, Point)
};

struct KernelEquation {
  Poly S;      // t-free Laurent polynomial in x, y, xbar, ybar
  int r = 1;   // kernel 1 - t^r * S
  int unknown = 0;
  Poly rhs;    // Laurent polynomial in x, y over Q[t]
  std::vector<std::pair<Poly, SectionSpec>> sections;  // coefficient, section
};

// the named section of a truncated solution series
inline Poly extract_section(const Poly& f, const SectionSpec& s) {
  Poly r;
  for (auto& [e, c] : f.terms()) {
    switch (s.kind) {
      case SectionKind::XSection:
        if (e[1] == s.j) r.add_term({e[0], 0, e[2]}, c);
        break;
      case SectionKind::YSection:
        if (e[0] == s.i) r.add_term({0, e[1], e[2]}, c);
        break;
      case SectionKind::Point:
        if (e[0] == s.i && e[1] == s.j) r.add_term({0, 0, e[2]}, c);
        break;
    }
  }
  return r;
}

inline Poly truncate_t(const Poly& p, int N) {
  Poly r;
  for (auto& [e, c] : p.terms())
    if (e[2] <= N) r.add_term(e, c);
  return r;
}

// single-unknown equation -> kernel form with all sections enumerated:
// Dx^k Dy^l F = xbar^k ybar^l (F - sum_{i<k} x^i [x^i]F - sum_{j<l} y^j [y^j]F
//                                + sum_{i<k, j<l} x^i y^j [x^i y^j]F)
inline KernelEquation to_kernel_form(const DDE& d) {
  d.validate();
  if (d.unknowns.size() != 1)
    throw EngineError(ErrKind::UnsupportedSystem,
                      "kernel form of a system requires a user-supplied kernel equation");
  const DdeEquation& eq = d.eqs[0];
  KernelEquation ke;
  ke.unknown = 0;
  ke.r = 1;
  ke.rhs = eq.free;
  std::map<std::tuple<int, SectionKind, int, int>, Poly> secs;
  for (auto& tm : d.eqs[0].terms) {
    Poly shift = Poly::monomial(Rat(1), {-tm.k, -tm.l, 0});
    ke.S += tm.coeff * shift;
    Poly base = Poly::var(2) * tm.coeff * shift;  // t * P_kl * xbar^k ybar^l
    for (int i = 0; i < tm.k; ++i)
      secs[{0, SectionKind::YSection, i, 0}] -= base * Poly::var(0, i);
    for (int j = 0; j < tm.l; ++j)
      secs[{0, SectionKind::XSection, 0, j}] -= base * Poly::var(1, j);
    for (int i = 0; i < tm.k; ++i)
      for (int j = 0; j < tm.l; ++j)
        secs[{0, SectionKind::Point, i, j}] += base * Poly::var(0, i) * Poly::var(1, j);
  }
  if (ke.S.depends_on(2))
    throw EngineError(ErrKind::UnsupportedKernelShape, "kernel has mixed t powers");
  for (auto& [key, coeff] : secs) {
    if (coeff.is_zero()) continue;
    auto [u, kind, i, j] = key;
    ke.sections.push_back({coeff, SectionSpec{u, kind, i, j}});
  }
  return ke;
}

// truncated-identity check of a kernel equation against the oracle
inline bool verify_kernel_form(const KernelEquation& k, const DDE& d, int N = 10) {
  if (k.S.depends_on(2))
    throw EngineError(ErrKind::UnsupportedKernelShape, "kernel has mixed t powers");
  if (k.unknown < 0 || k.unknown >= (int)d.unknowns.size())
    throw EngineError(ErrKind::PreconditionViolated, "kernel unknown out of range");
  auto f = oracle_expand(d, N);
  Poly kernel = Poly(1) - Poly::var(2, k.r) * k.S;
  Poly lhs = kernel * f[k.unknown];
  Poly rhs = k.rhs;
  for (auto& [coeff, spec] : k.sections) {
    if (spec.unknown < 0 || spec.unknown >= (int)d.unknowns.size())
      throw EngineError(ErrKind::PreconditionViolated, "section references unknown out of range");
    rhs += coeff * extract_section(f[spec.unknown], spec);
  }
  return truncate_t(lhs - rhs, N).is_zero();
}

// a cone <(0,0,1),(a,0,1),(0,b,1)> containing supp(F) in (x,y,t)-exponents:
// per t-step, a delta term grows the x-degree by at most deg_x(coeff) - k and
// the y-degree by at most deg_y(coeff) - l
inline Cone support_cone_bound(const DDE& d) {
  d.validate();
  long a = 0, b = 0;
  bool joint = false;  // some step grows x- and y-degree simultaneously
  for (auto& eq : d.eqs) {
    if (!eq.free.is_zero() && !eq.free.is_constant())
      throw EngineError(ErrKind::PreconditionViolated,
                        "support cone bound requires constant free terms");
    for (auto& tm : eq.terms)
      for (auto& [e, c] : tm.coeff.terms()) {
        long gx = e[0] - tm.k, gy = e[1] - tm.l;
        a = std::max(a, gx);
        b = std::max(b, gy);
        if (gx > 0 && gy > 0) joint = true;
      }
  }
  // an exponent (i,j,n) of the solution satisfies i/a + j/b <= n because
  // every t-step increases that quantity by gx/a + gy/b <= s <= 1 after the
  // doubling below; i, j >= 0 holds since discrete derivatives of
  // polynomials are polynomials
  if (joint) a *= 2, b *= 2;
  return Cone(3, {qvec3(Rat(0), Rat(0), Rat(1)), qvec3(Rat(a), Rat(0), Rat(1)),
                  qvec3(Rat(0), Rat(b), Rat(1))});
}

}  // namespace osum
