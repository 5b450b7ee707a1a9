#pragma once

// The positive-part certifier: candidate order regions from the common
// refinement of Newton-polytope normal fans, series embeddings of the
// splitting field, the emptiness test showing that all non-identity terms of
// a section-free combination vanish under [x>= y>=], machine-checkable
// certificates with a cones-only replay, and the end-to-end solve pipeline
// cross-checked against the brute-force series oracle.

#include <future>
#include <numeric>
#include <sstream>

#include "osum/orbit.hpp"
#include "osum/puiseux.hpp"

namespace osum {

// input of the certifier: an eliminant m over Q(x,y), the non-identity
// triples (p1, p2, p3) of a section-free combination as polynomials in the
// eliminant variable, and a cone containing the support of the solution
// series with C0 meeting the (x,y)-plane only at the origin
struct CertifierInput {
  UPoly<RatFun> m;
  std::vector<std::array<UPoly<RatFun>, 3>> L0;
  Cone C0{3};
};

namespace detail {

using Ray = std::array<long, 2>;

inline Ray primitive_ray(long a, long b) {
  long g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
  if (g > 1) a /= g, b /= g;
  return {a, b};
}

inline long ray_cross(const Ray& a, const Ray& b) { return a[0] * b[1] - a[1] * b[0]; }

// outer normal rays of the edges of the Newton polytope of p in the
// (x,y)-exponent plane
inline std::vector<Ray> fan_rays(const Poly& p) {
  if (p.depends_on(2))
    throw EngineError(ErrKind::PreconditionViolated, "order regions of a t-dependent input");
  std::vector<Ray> pts;
  for (auto& [e, c] : p.terms()) pts.push_back({(long)e[0], (long)e[1]});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) return {};
  auto cross3 = [](const Ray& o, const Ray& a, const Ray& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  // monotone-chain hull, counter-clockwise, collinear points dropped
  std::vector<Ray> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t base = hull.size();
    for (auto& q : pts) {
      while (hull.size() >= base + 2 &&
             cross3(hull[hull.size() - 2], hull[hull.size() - 1], q) <= 0)
        hull.pop_back();
      hull.push_back(q);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  std::vector<Ray> rays;
  if (hull.size() == 2) {
    // degenerate polytope: a segment; the fan is a pair of half-planes
    Ray d{hull[1][0] - hull[0][0], hull[1][1] - hull[0][1]};
    rays.push_back(primitive_ray(d[1], -d[0]));
    rays.push_back(primitive_ray(-d[1], d[0]));
    return rays;
  }
  for (size_t i = 0; i < hull.size(); ++i) {
    const Ray& a = hull[i];
    const Ray& b = hull[(i + 1) % hull.size()];
    rays.push_back(primitive_ray(b[1] - a[1], a[0] - b[0]));
  }
  return rays;
}

// counter-clockwise angular order starting at direction (1, 0)
inline bool ray_angle_less(const Ray& a, const Ray& b) {
  auto half = [](const Ray& r) { return (r[1] > 0 || (r[1] == 0 && r[0] > 0)) ? 0 : 1; };
  if (half(a) != half(b)) return half(a) < half(b);
  return ray_cross(a, b) > 0;
}

inline Cone lift_plane(const Cone& c2) {
  std::vector<QVec> g;
  for (auto& v : c2.gens()) g.push_back(qvec3(Rat(v[0]), Rat(v[1]), Rat(0)));
  return Cone(3, g);
}

// does the cone meet the plane t = 0 outside the origin?
inline bool cone_meets_xyplane(const Cone& c0) {
  int n = (int)c0.gens().size();
  std::vector<LinCon> cons;
  LinCon z;
  z.a.assign(n, Rat(0));
  for (int i = 0; i < n; ++i) z.a[i] = Rat(c0.gens()[i][2]);
  z.rel = Rel::EQ;
  z.b = 0;
  cons.push_back(z);
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
  return fm_feasible(cons, n);
}

}  // namespace detail

// common refinement of the normal fans of the Newton polytopes of the given
// polynomials, as maximal sectors in weight space: within each sector, every
// input polynomial has a constant leading monomial for every total order
// induced by an interior weight
inline std::vector<Cone> candidate_order_regions(const std::vector<Poly>& polys) {
  std::vector<detail::Ray> rays;
  for (auto& p : polys)
    for (auto& r : detail::fan_rays(p)) rays.push_back(r);
  std::sort(rays.begin(), rays.end(), detail::ray_angle_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  if (rays.empty())
    return {Cone::from_int(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}})};
  if (rays.size() == 1) {
    rays.push_back({-rays[0][0], -rays[0][1]});
    std::sort(rays.begin(), rays.end(), detail::ray_angle_less);
  }
  std::vector<Cone> out;
  for (size_t i = 0; i < rays.size(); ++i) {
    const detail::Ray& a = rays[i];
    const detail::Ray& b = rays[(i + 1) % rays.size()];
    std::vector<std::vector<long>> gens = {{a[0], a[1]}};
    if (detail::ray_cross(a, b) <= 0) {
      // the sector spans a straight angle: keep it convex with a mid ray
      gens.push_back({-a[1], a[0]});
    }
    gens.push_back({b[0], b[1]});
    out.push_back(Cone::from_int(2, gens));
  }
  return out;
}

// membership of a quadratic-form weight in a sector (exact, via signs of
// cross products over Q(sqrt(D)))
inline bool region_contains_weight(const Cone& sector, const OrderWeight& w) {
  if (!w.quad_form) return false;
  auto cross_gw = [&](const ZVec& g) { return Quad(Rat(g[0])) * w.w2 - Quad(Rat(g[1])) * w.w1; };
  auto dot_gw = [&](const ZVec& g) { return Quad(Rat(g[0])) * w.w1 + Quad(Rat(g[1])) * w.w2; };
  const auto& gens = sector.gens();
  for (auto& g : gens)
    if (cross_gw(g).is_zero() && dot_gw(g).sign() > 0) return true;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < gens.size(); ++j) {
      if (i == j) continue;
      Int cz = gens[i][0] * gens[j][1] - gens[i][1] * gens[j][0];
      if (cz <= 0) continue;  // (g_i, g_j) not a counter-clockwise basis
      // w = l1 g_i + l2 g_j with l1, l2 >= 0
      Quad l2 = cross_gw(gens[i]);
      Quad l1 = -cross_gw(gens[j]);
      if (l1.sign() >= 0 && l2.sign() >= 0) return true;
    }
  return false;
}

// a total order induced by an interior weight of the sector: lexicographic
// refinement of the rational interior direction by its rotation
inline OrderWeight region_witness(const Cone& sector) {
  Rat u0(0), u1(0);
  for (auto& g : sector.gens()) {
    u0 += Rat(g[0]);
    u1 += Rat(g[1]);
  }
  if (u0 == 0 && u1 == 0) u0 = 1;
  return OrderWeight::stage({{u0, u1}, {-u1, u0}});
}

// ---------------------------------------------------------------------------
// certificates

struct TripleCert {
  bool zero_term = false;  // p3(phi) vanishes identically
  QExp v1{}, v2{}, v3{};   // support vertices of p1(phi), p2(phi), p3(phi)
  Cone cv1{2}, cv2{2}, cv3{2};  // vertex-cone estimates
  Cone cprime{3};               // composed support cone of F(p1(phi), p2(phi))
  bool empty = false;           // (Q>=0^2 x Q) cap (v3 + cv3 + cprime) is empty
};

struct Certificate {
  bool success = false;
  int region_index = -1;  // index into candidate_order_regions
  int root_index = -1;    // index into the region's series-root list
  Cone region{2};         // weight-space sector of the successful branch
  Cone order_cone{2};     // order-cone estimate of phi (dual of the sector)
  OrderWeight witness;    // total order used for the branch
  PuiseuxEncoding phi;
  std::vector<TripleCert> triples;
  std::vector<std::string> attempts;  // log of failed branches
};

struct PpeOptions {
  int nterms = 6;         // expansion length for coefficient series
  NewtonOptions newton{};
  std::optional<OrderWeight> preferred;  // quadratic-form weight tried first
  bool parallel = false;
};

namespace detail {

struct RegionOutcome {
  bool success = false;
  Certificate cert;                    // the successful branch, if any
  std::vector<std::string> attempts;   // failure log of this region
  std::optional<EngineError> error;    // subcall failure of this region
};

inline RegionOutcome eval_region(const CertifierInput& ci, const PpeOptions& opt, int idx,
                                 const Cone& sector) {
  RegionOutcome out;
  OrderWeight w = (opt.preferred && region_contains_weight(sector, *opt.preferred))
                      ? *opt.preferred
                      : region_witness(sector);
  Cone c1 = cone_dual(sector);
  auto note = [&](const std::string& msg) {
    out.attempts.push_back("region " + std::to_string(idx) + ": " + msg);
  };
  if (!is_strictly_convex(c1)) {
    note("order-cone estimate not strictly convex");
    return out;
  }
  std::vector<PuiseuxEncoding> roots;
  try {
    roots = newton_puiseux(ci.m, w, opt.newton);
  } catch (const EngineError& e) {
    note(std::string("series roots unavailable: ") + e.what());
    out.error = e;
    return out;
  }
  for (int ri = 0; ri < (int)roots.size(); ++ri) {
    Certificate c;
    c.region_index = idx;
    c.root_index = ri;
    c.region = sector;
    c.order_cone = c1;
    c.witness = w;
    c.phi = roots[ri];
    bool branch_ok = true;
    for (size_t ti = 0; ti < ci.L0.size() && branch_ok; ++ti) {
      const auto& t = ci.L0[ti];
      TripleCert tc;
      PuiseuxEncoding e3;
      try {
        e3 = apply_poly(t[2], c.phi, opt.nterms);
        if (e3.is_zero()) {
          tc.zero_term = true;
          tc.empty = true;
          c.triples.push_back(tc);
          continue;
        }
        PuiseuxEncoding e1 = apply_poly(t[0], c.phi, opt.nterms);
        PuiseuxEncoding e2 = apply_poly(t[1], c.phi, opt.nterms);
        if (e1.is_zero() || e2.is_zero()) {
          note("root " + std::to_string(ri) + ": substitution argument vanishes");
          branch_ok = false;
          break;
        }
        SupportEstimate s1 = support_vertices(e1), s2 = support_vertices(e2),
                        s3 = support_vertices(e3);
        bool done = false;
        for (auto& [v1, cv1] : s1.vertices) {
          if (done) break;
          if (!is_strictly_convex(cv1)) continue;
          for (auto& [v2, cv2] : s2.vertices) {
            if (done) break;
            if (!is_strictly_convex(cv2)) continue;
            Cone cp(3);
            try {
              cp = composition_support(ci.C0, v1, v2, cv1, cv2);
            } catch (const EngineError&) {
              continue;  // this vertex pair does not certify a composition
            }
            for (auto& [v3, cv3] : s3.vertices) {
              if (!is_strictly_convex(cv3)) continue;
              ShiftedCone sc{qvec3(v3[0], v3[1], Rat(0)), cone_hull(lift_plane(cv3), cp)};
              if (empty_meet_orthant(sc)) {
                tc.v1 = v1;
                tc.cv1 = cv1;
                tc.v2 = v2;
                tc.cv2 = cv2;
                tc.v3 = v3;
                tc.cv3 = cv3;
                tc.cprime = cp;
                tc.empty = true;
                done = true;
                break;
              }
            }
          }
        }
        if (!done) {
          note("root " + std::to_string(ri) + ": term " + std::to_string(ti) +
               " keeps exponents in the closed first orthant");
          branch_ok = false;
          break;
        }
        c.triples.push_back(tc);
      } catch (const EngineError& e) {
        note("root " + std::to_string(ri) + ": " + e.what());
        out.error = e;
        branch_ok = false;
      }
    }
    if (branch_ok) {
      c.success = true;
      out.success = true;
      out.cert = std::move(c);
      return out;
    }
  }
  return out;
}

}  // namespace detail

// decide whether [x>= y>=] p3(phi) F(p1(phi), p2(phi)) = 0 for all triples,
// for some series root phi of m over some candidate order region; the
// returned certificate is the first successful (region, root) branch in
// deterministic order (the preferred region, when given, is tried first)
inline Certificate ppe(const CertifierInput& ci, const PpeOptions& opt = {}) {
  if (ci.m.deg() < 1)
    throw EngineError(ErrKind::PreconditionViolated, "eliminant must be non-constant");
  if (detail::cone_meets_xyplane(ci.C0))
    throw EngineError(ErrKind::PreconditionViolated,
                      "solution support cone meets the (x,y)-plane nontrivially");
  std::vector<Poly> polys;
  auto add = [&](const UPoly<RatFun>& q) {
    for (int i = 0; i <= q.deg(); ++i) {
      const RatFun& c = q.coeff(i);
      if (c.is_zero()) continue;
      if (c.depends_on(2))
        throw EngineError(ErrKind::PreconditionViolated, "certifier input depends on t");
      polys.push_back(c.num());
      polys.push_back(c.den());
    }
  };
  add(ci.m);
  for (auto& t : ci.L0) {
    add(t[0]);
    add(t[1]);
    add(t[2]);
  }
  std::vector<Cone> sectors = candidate_order_regions(polys);
  std::vector<int> order(sectors.size());
  std::iota(order.begin(), order.end(), 0);
  if (opt.preferred)
    std::stable_partition(order.begin(), order.end(), [&](int i) {
      return region_contains_weight(sectors[i], *opt.preferred);
    });

  Certificate failed;
  std::optional<EngineError> first_error;
  int clean_regions = 0;
  auto absorb = [&](detail::RegionOutcome&& ro) -> std::optional<Certificate> {
    if (ro.success) return std::move(ro.cert);
    for (auto& a : ro.attempts) failed.attempts.push_back(a);
    if (ro.error) {
      if (!first_error) first_error = ro.error;
    } else {
      ++clean_regions;
    }
    return std::nullopt;
  };
  if (opt.parallel) {
    std::vector<std::future<detail::RegionOutcome>> futs;
    for (int idx : order)
      futs.push_back(std::async(std::launch::async, [&, idx] {
        return detail::eval_region(ci, opt, idx, sectors[idx]);
      }));
    for (auto& f : futs)
      if (auto c = absorb(f.get())) return *c;
  } else {
    for (int idx : order)
      if (auto c = absorb(detail::eval_region(ci, opt, idx, sectors[idx]))) return *c;
  }
  // no region could be evaluated cleanly: surface the subcall failure
  if (first_error && clean_regions == 0) throw *first_error;
  return failed;
}

// re-verify a successful certificate using only cone operations (no series
// recomputation): recompute the composed cones and emptiness verdicts and
// compare them with the recorded ones
inline bool replay(const Certificate& c, const CertifierInput& ci) {
  if (!c.success) return false;
  try {
    if (detail::cone_meets_xyplane(ci.C0)) return false;
    if (!is_strictly_convex(c.order_cone)) return false;
    if (c.triples.size() != ci.L0.size()) return false;
    for (auto& tc : c.triples) {
      if (tc.zero_term) continue;
      if (!tc.empty) return false;
      if (!is_strictly_convex(tc.cv1) || !is_strictly_convex(tc.cv2) ||
          !is_strictly_convex(tc.cv3))
        return false;
      Cone cp = composition_support(ci.C0, tc.v1, tc.v2, tc.cv1, tc.cv2);
      if (cp != tc.cprime) return false;
      ShiftedCone sc{qvec3(tc.v3[0], tc.v3[1], Rat(0)),
                     cone_hull(detail::lift_plane(tc.cv3), cp)};
      if (!empty_meet_orthant(sc)) return false;
    }
    return true;
  } catch (const EngineError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// end-to-end pipeline

struct SolveOptions {
  OrbitOptions orbit{};
  PpeOptions cert{};
  int kernel_verify_order = 6;
  int check_order = 10;            // oracle cross-check order, rational field
  int check_order_algebraic = 8;   // oracle cross-check order, extended field
};

struct SolveResult {
  std::string stage;  // last stage reached: kernel, orbit, orbitsum, certify, check, done
  bool success = false;
  std::string diagnostic;
  KernelEquation kernel;
  Orbit orbit;
  std::vector<OrbitSumEquation> basis;
  int chosen = -1;  // index of the certified basis element
  Certificate cert;
  bool rhs_rational = false;
  RatFun rhs;  // the solution is [x>= y>=] of this series, when rational
  int check_order = 0;
  bool oracle_match = false;
};

inline SolveResult solve(const DDE& d, const std::optional<KernelEquation>& kopt = {},
                         const SolveOptions& so = {}) {
  SolveResult res;
  auto fail = [&](const std::string& stage, const std::string& why) {
    res.stage = stage;
    res.success = false;
    res.diagnostic = why;
    return res;
  };
  auto staged = [&](const std::string& stage, auto&& fn) {
    res.stage = stage;
    try {
      return fn();
    } catch (const EngineError& e) {
      throw EngineError(e.kind(), "stage " + stage + ": " + e.what());
    }
  };

  KernelEquation k = staged("kernel", [&] { return kopt ? *kopt : to_kernel_form(d); });
  if (!staged("kernel", [&] { return verify_kernel_form(k, d, so.kernel_verify_order); }))
    return fail("kernel", "kernel equation does not match the system");
  res.kernel = k;

  res.orbit = staged("orbit", [&] { return compute_orbit(k.S, so.orbit); });
  res.basis = staged("orbitsum", [&] { return section_free_basis(k, res.orbit); });
  if (res.basis.empty()) return fail("orbitsum", "no section-free combination exists");

  // a usable combination keeps the identity coefficient 1 and has t-free
  // substitution coefficients
  auto tfree = [](const FieldElem& e) {
    for (auto& c : e.rep().coeffs())
      if (c.depends_on(2)) return false;
    return true;
  };
  for (size_t i = 0; i < res.basis.size() && res.chosen < 0; ++i) {
    const auto& os = res.basis[i];
    if (!(os.weights[0] == FieldElem(1))) continue;
    bool ok = true;
    for (auto& [p1, p2, p3] : os.triples)
      if (!tfree(p1) || !tfree(p2) || !tfree(p3)) ok = false;
    if (ok) res.chosen = (int)i;
  }
  if (res.chosen < 0)
    return fail("orbitsum", "no combination with unit identity coefficient and t-free terms");
  const OrbitSumEquation& os = res.basis[res.chosen];

  CertifierInput ci;
  ci.m = res.orbit.field->g;
  for (auto& [p1, p2, p3] : os.triples) ci.L0.push_back({p1.rep(), p2.rep(), p3.rep()});
  ci.C0 = staged("certify", [&] { return support_cone_bound(d); });
  res.cert = staged("certify", [&] { return ppe(ci, so.cert); });
  if (!res.cert.success) return fail("certify", "no certified series embedding found");

  res.stage = "check";
  res.rhs_rational = os.rhs.is_rational();
  if (!res.rhs_rational)
    return fail("check", "series extraction of an algebraic right-hand side is unsupported");
  res.rhs = os.rhs.rational_value();
  res.check_order =
      res.orbit.field->trivial() ? so.check_order : so.check_order_algebraic;
  Poly pp = staged("check", [&] { return positive_part(res.rhs, res.check_order, false); });
  Poly oracle = truncate_t(oracle_expand(d, res.check_order)[k.unknown], res.check_order);
  res.oracle_match = pp == oracle;
  if (!res.oracle_match) return fail("check", "positive part disagrees with the series oracle");
  res.stage = "done";
  res.success = true;
  return res;
}

}  // namespace osum
