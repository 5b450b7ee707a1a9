#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "osum/puiseux.hpp"

using namespace osum;

namespace {

OrderWeight w_pos() {  // order with 1 > x, 1 > y (negative weight components)
  return OrderWeight::quad(Quad(Rat(0), Rat(-1), 2), Quad(frac(-1, 2)));
}
OrderWeight w_neg() {  // opposite: x > 1, y > 1
  return OrderWeight::quad(Quad(Rat(0), Rat(1), 2), Quad(frac(1, 2)));
}

Poly px() { return Poly::var(0); }
Poly py() { return Poly::var(1); }

Poly rand_poly(std::mt19937& rng, int min_exp, int max_exp, int max_terms, bool nonzero) {
  std::uniform_int_distribution<int> ec(min_exp, max_exp), cc(-3, 3),
      tc(1, max_terms);
  Poly p;
  int n = tc(rng);
  for (int i = 0; i < n; ++i) p.add_term({ec(rng), ec(rng), 0}, Rat(cc(rng)));
  if (nonzero && p.is_zero()) p = p + Poly(1);
  return p;
}

// every true series term exhibited by the longer computation but not listed
// by `cert` must be admitted by cert's tail region (below its cut exponent)
bool tail_covers(const PuiseuxEncoding& cert, const PuiseuxEncoding& longer, size_t from) {
  if (cert.is_exact()) {
    return longer.terms().size() == cert.terms().size() && longer.is_exact();
  }
  for (size_t i = from; i < longer.terms().size(); ++i)
    if (!cert.hidden_possible(longer.terms()[i].e)) return false;
  return true;
}

QPoly enc_to_qpoly(const PuiseuxEncoding& e) {
  QPoly q;
  for (auto& t : e.terms()) q.add_term(t.e, t.c);
  return q;
}

}  // namespace

TEST_CASE("square root of x: two exact encodings") {
  UPoly<RatFun> p = UPoly<RatFun>::monomial(RatFun(1), 2) - UPoly<RatFun>(RatFun(px()));
  for (auto& w : {w_pos(), w_neg()}) {
    auto roots = newton_puiseux(p, w);
    REQUIRE(roots.size() == 2);
    for (auto& r : roots) {
      REQUIRE(r.is_exact());
      REQUIRE(r.terms().size() == 1);
      CHECK(r.terms()[0].e == QExp{frac(1, 2), Rat(0)});
      CHECK(r.ramification() == 2);
    }
    CHECK(roots[0].terms()[0].c + roots[1].terms()[0].c == Quad(0));
    CHECK(roots[0].terms()[0].c * roots[0].terms()[0].c == Quad(1));
  }
}

TEST_CASE("geometric series root of (1-x)Z - 1, both orientations") {
  UPoly<RatFun> p =
      UPoly<RatFun>::monomial(RatFun(Poly(1) - px()), 1) - UPoly<RatFun>(RatFun(1));
  NewtonOptions opt;
  opt.kmin = 4;

  auto a = newton_puiseux(p, w_pos(), opt);  // 1/(1-x) = sum x^j
  REQUIRE(a.size() == 1);
  REQUIRE(a[0].terms().size() >= 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(a[0].terms()[j].e == QExp{Rat(j), Rat(0)});
    CHECK(a[0].terms()[j].c == Quad(1));
  }
  REQUIRE(!a[0].is_exact());
  // the undetermined part is exactly the higher powers of x
  int m = (int)a[0].terms().size();
  CHECK(a[0].hidden_possible({Rat(m), Rat(0)}));
  CHECK(a[0].hidden_possible({Rat(m + 5), Rat(0)}));
  CHECK(!a[0].hidden_possible({Rat(m - 1), Rat(0)}));  // listed, hence known
  CHECK(!a[0].hidden_possible({Rat(m), Rat(1)}));      // off the x-axis

  auto b = newton_puiseux(p, w_neg(), opt);  // -sum_{j>=1} x^-j
  REQUIRE(b.size() == 1);
  for (int j = 0; j < 4; ++j) {
    CHECK(b[0].terms()[j].e == QExp{Rat(-1 - j), Rat(0)});
    CHECK(b[0].terms()[j].c == Quad(-1));
  }
}

TEST_CASE("half-integer branch pair with leading terms +-2 x^(3/2) y") {
  // Z^2 - 4x^3y^2 - (x+y+xy+xy^2)^2 under the weight (sqrt2, 1/2)
  Poly s = px() + py() + px() * py() + px() * py() * py();
  Poly q0 = Poly(4) * px().pow(3) * py().pow(2) + s * s;
  UPoly<RatFun> p = UPoly<RatFun>::monomial(RatFun(1), 2) - UPoly<RatFun>(RatFun(q0));
  OrderWeight w = OrderWeight::quad(Quad(Rat(0), Rat(1), 2), Quad(frac(1, 2)));
  auto roots = newton_puiseux(p, w);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].lead().e == QExp{frac(3, 2), Rat(1)});
  CHECK(roots[0].lead().c == Quad(2));
  CHECK(roots[1].lead().e == QExp{frac(3, 2), Rat(1)});
  CHECK(roots[1].lead().c == Quad(-2));
  for (auto& r : roots) {
    CHECK(r.ramification() == 2);
    // support estimate within the expected strictly convex cone
    Cone expect(2, {qvec2(Rat(-1), Rat(2)), qvec2(Rat(-1), Rat(-2))});
    CHECK(expect.contains_cone(r.hull_cone()));
  }
  // certificate soundness: a longer expansion stays inside the short one's tail
  NewtonOptions longer;
  longer.kmin = 5;
  auto roots2 = newton_puiseux(p, w, longer);
  REQUIRE(roots2.size() == 2);
  for (int i = 0; i < 2; ++i) {
    size_t n = roots[i].terms().size();
    REQUIRE(roots2[i].terms().size() >= n);
    for (size_t j = 0; j < n; ++j) {
      CHECK(roots2[i].terms()[j].e == roots[i].terms()[j].e);
      CHECK(roots2[i].terms()[j].c == roots[i].terms()[j].c);
    }
    CHECK(tail_covers(roots[i], roots2[i], n));
  }
}

TEST_CASE("expansion of 1/(1-x-y) gives binomial coefficients") {
  RatFun r(Poly(1), Poly(1) - px() - py());
  auto e = expand_ratfun(r, w_pos(), 30);
  for (auto& t : e.terms()) {
    long a = t.e[0].get_num().get_si(), b = t.e[1].get_num().get_si();
    Int bi;
    mpz_bin_uiui(bi.get_mpz_t(), a + b, a);
    CHECK(t.c == Quad(Rat(bi)));
  }
  REQUIRE(!e.is_exact());
  Cone quadrant(2, {qvec2(Rat(1), Rat(0)), qvec2(Rat(0), Rat(1))});
  CHECK(quadrant.contains_cone(e.hull_cone()));
  // soundness of the tail: a longer expansion's extra terms lie in it
  auto longer = expand_ratfun(r, w_pos(), 80);
  size_t cut = 0;
  while (cut < longer.terms().size() &&
         e.order().cmp(longer.terms()[cut].e, e.tail_vertex()) > 0)
    ++cut;
  CHECK(cut == e.terms().size());
  CHECK(tail_covers(e, longer, cut));
}

TEST_CASE("expansion of a constant and of exact quotients") {
  auto e = expand_ratfun(RatFun(7), w_pos(), 5);
  REQUIRE(e.is_exact());
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms()[0].e == QExp{Rat(0), Rat(0)});
  CHECK(e.terms()[0].c == Quad(7));
  // monomial denominator: expansion terminates
  auto m = expand_ratfun(RatFun(Poly(1) + px() * py(), px()), w_pos(), 10);
  CHECK(m.is_exact());
  CHECK(m.terms().size() == 2);
}

TEST_CASE("product of expansions of r and 1/r is one, randomized", "[prop]") {
  std::mt19937 rng(20240817);
  int done = 0;
  while (done < 200) {
    Poly p = rand_poly(rng, -1, 2, 3, true);
    Poly q = rand_poly(rng, -1, 2, 3, true);
    RatFun r(p, q);
    if (r.is_zero()) continue;
    OrderWeight w = (done % 2) ? w_pos() : w_neg();
    auto a = expand_ratfun(r, w, 15);
    auto b = expand_ratfun(r.inv(), w, 15);
    auto prod = a * b;
    // all kept terms must reduce to the constant 1
    bool ok = true;
    for (auto& t : prod.terms()) {
      if (t.e == QExp{Rat(0), Rat(0)})
        ok = ok && t.c == Quad(1);
      else
        ok = false;
    }
    if (prod.is_exact()) ok = ok && prod.terms().size() == 1;
    REQUIRE(ok);
    ++done;
  }
}

TEST_CASE("encoding sums and cancellation") {
  auto e = expand_ratfun(RatFun(Poly(1), Poly(1) - px() - py()), w_pos(), 8);
  auto z = e + (-e);
  CHECK(z.terms().empty());
  // exact cancellation of exact encodings
  auto a = expand_ratfun(RatFun(px() + py()), w_pos(), 8);
  auto za = a - a;
  CHECK(za.is_zero());
  // sum against direct expansion
  RatFun r1(Poly(1), Poly(1) - px());
  RatFun r2(Poly(1), Poly(1) - py());
  auto s = expand_ratfun(r1, w_pos(), 12) + expand_ratfun(r2, w_pos(), 12);
  auto direct = expand_ratfun(r1 + r2, w_pos(), 24);
  QPoly sq = enc_to_qpoly(s);
  for (auto& t : direct.terms()) {
    if (s.hidden_possible(t.e)) continue;
    auto it = sq.terms().find(t.e);
    REQUIRE(it != sq.terms().end());
    CHECK(it->second == t.c);
  }
}

TEST_CASE("series roots reproduce rational functions, randomized", "[prop]") {
  // q1 * Z - q0 has the single root q0/q1: terms must agree with the direct
  // expansion, and the tail certificate at N terms must cover terms N+1..2N
  std::mt19937 rng(991);
  int done = 0;
  while (done < 200) {
    Poly q0 = rand_poly(rng, 0, 2, 3, true);
    Poly q1 = rand_poly(rng, 0, 2, 3, true);
    OrderWeight w = (done % 2) ? w_pos() : w_neg();
    UPoly<RatFun> p = UPoly<RatFun>::monomial(RatFun(q1), 1) - UPoly<RatFun>(RatFun(q0));
    NewtonOptions shortOpt, longOpt;
    shortOpt.kmin = 3;
    longOpt.kmin = 6;
    shortOpt.max_steps = longOpt.max_steps = 64;
    std::vector<PuiseuxEncoding> a, b;
    try {
      a = newton_puiseux(p, w, shortOpt);
      b = newton_puiseux(p, w, longOpt);
    } catch (const EngineError&) {
      continue;  // budget cases are skipped, not counted
    }
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    auto direct = expand_laurent_ratio(q0, q1, w, 20);
    size_t n = std::min(a[0].terms().size(), direct.terms().size());
    for (size_t i = 0; i < n; ++i) {
      REQUIRE(a[0].terms()[i].e == direct.terms()[i].e);
      REQUIRE(a[0].terms()[i].c == direct.terms()[i].c);
    }
    REQUIRE(tail_covers(a[0], b[0], a[0].terms().size()));
    ++done;
  }
}

TEST_CASE("residual-order contract for quadratic series roots, randomized", "[prop]") {
  std::mt19937 rng(4242);
  int done = 0;
  while (done < 200) {
    // Z^2 - s with s a square times a unit-like perturbation keeps the
    // initial coefficient equations rational or in one quadratic extension
    Poly m = rand_poly(rng, 0, 2, 2, true);
    Poly u = rand_poly(rng, 1, 2, 2, false);
    Poly s = m * m * (Poly(1) + u);
    if (s.is_zero()) continue;
    OrderWeight w = (done % 2) ? w_pos() : w_neg();
    UPoly<RatFun> p = UPoly<RatFun>::monomial(RatFun(1), 2) - UPoly<RatFun>(RatFun(s));
    NewtonOptions opt;
    opt.kmin = 3;
    opt.max_steps = 64;
    std::vector<PuiseuxEncoding> roots;
    try {
      roots = newton_puiseux(p, w, opt);
    } catch (const EngineError&) {
      continue;
    }
    REQUIRE(roots.size() == 2);
    for (auto& r : roots) {
      // residual p(tau) must sit strictly below the last term's contribution
      QPoly tau = enc_to_qpoly(r);
      QPoly residual = tau * tau - QPoly::from_poly(s);
      if (r.is_exact()) {
        REQUIRE(residual.is_zero());
        continue;
      }
      REQUIRE(!residual.is_zero());
      // contribution level: last term exponent + lead exponent of dp/dZ(tau)
      QPoly dp = tau + tau;
      QExp level = r.terms().back().e + dp.lt(w).first;
      for (auto& [e, c] : residual.terms()) CHECK(w.cmp(e, level) < 0);
      // the square of the encoding agrees with s wherever it claims to be
      // determined
      auto sq = r * r;
      QPoly diff = enc_to_qpoly(sq) - QPoly::from_poly(s);
      for (auto& [e, c] : diff.terms()) CHECK(sq.hidden_possible(e));
    }
    ++done;
  }
}

TEST_CASE("support vertices of simple encodings") {
  auto a = expand_ratfun(RatFun(px() + py()), w_pos(), 4);
  auto va = support_vertices(a);
  REQUIRE(va.vertices.size() == 2);
  CHECK(va.vertices[0].first == QExp{Rat(0), Rat(1)});
  CHECK(va.vertices[1].first == QExp{Rat(1), Rat(0)});
  for (auto& [v, c] : va.vertices) CHECK(c.gens().size() == 1);

  auto m = expand_ratfun(RatFun(px() * px() * py()), w_pos(), 4);
  auto vm = support_vertices(m);
  REQUIRE(vm.vertices.size() == 1);
  CHECK(vm.vertices[0].first == QExp{Rat(2), Rat(1)});
  CHECK(vm.vertices[0].second.gens().empty());

  // interior points are not vertices
  auto tri = expand_ratfun(RatFun(Poly(1) + px() * py() + px().pow(2) * py().pow(2)), w_pos(), 8);
  auto vt = support_vertices(tri);
  REQUIRE(vt.vertices.size() == 2);
}

TEST_CASE("support union covers all listed exponents, randomized", "[prop]") {
  std::mt19937 rng(777);
  for (int it = 0; it < 200; ++it) {
    Poly p = rand_poly(rng, -2, 3, 4, true);
    Poly q = rand_poly(rng, -2, 2, 3, true);
    OrderWeight w = (it % 2) ? w_pos() : w_neg();
    auto e = expand_ratfun(RatFun(p, q), w, 6);
    auto se = support_vertices(e);
    if (e.is_zero()) {
      CHECK(se.vertices.empty());
      continue;
    }
    REQUIRE(!se.vertices.empty());
    for (auto& t : e.terms()) {
      bool covered = false;
      for (auto& [v, c] : se.vertices) {
        QExp d = t.e - v;
        if (c.contains(qvec2(d[0], d[1]))) covered = true;
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("positive part of the reflected kernel quotient") {
  // S = x + y + xbar + ybar; rhs = (xy - xbar y + xbar ybar - x ybar)/(1 - tS)
  Poly S = px() + py() + Poly::monomial(Rat(1), {-1, 0, 0}) + Poly::monomial(Rat(1), {0, -1, 0});
  Poly num = Poly::monomial(Rat(1), {1, 1, 0}) - Poly::monomial(Rat(1), {-1, 1, 0}) +
             Poly::monomial(Rat(1), {-1, -1, 0}) - Poly::monomial(Rat(1), {1, -1, 0});
  Poly den = Poly(1) - Poly::var(2) * S;
  Poly got = positive_part(RatFun(num, den), 2, true);
  // expected: xy * (1 + (x+y) t + ((x+y)^2 + 2) t^2)
  Poly xy = Poly::monomial(Rat(1), {1, 1, 0});
  Poly expect = xy * (Poly(1) + Poly::var(2) * (px() + py()) +
                      Poly::var(2).pow(2) * ((px() + py()).pow(2) + Poly(2)));
  CHECK(got == expect);

  // independent oracle: iterate F = 1 + t(x+y)F + t Dx F + t Dy F
  auto Dx = [&](const Poly& f) {
    Poly r;
    for (auto& [e, c] : f.terms())
      if (e[0] >= 1) r.add_term({e[0] - 1, e[1], e[2]}, c);
    return r;
  };
  auto Dy = [&](const Poly& f) {
    Poly r;
    for (auto& [e, c] : f.terms())
      if (e[1] >= 1) r.add_term({e[0], e[1] - 1, e[2]}, c);
    return r;
  };
  int N = 6;
  Poly F;
  for (int it = 0; it <= N + 1; ++it) {
    Poly nxt = Poly(1) + Poly::var(2) * ((px() + py()) * F + Dx(F) + Dy(F));
    Poly trunc;
    for (auto& [e, c] : nxt.terms())
      if (e[2] <= N) trunc.add_term(e, c);
    F = trunc;
  }
  CHECK(positive_part(RatFun(num, den), N, true) == xy * F);
}

TEST_CASE("positive part edge cases") {
  // [x>=y>=] xbar = 0
  CHECK(positive_part(RatFun(Poly::monomial(Rat(1), {-1, 0, 0})), 3, false).is_zero());
  // non-monomial t-constant denominator part is rejected
  CHECK_THROWS_AS(positive_part(RatFun(Poly(1), Poly(1) - px()), 3, true), EngineError);
  // strict vs non-strict
  Poly mix = Poly(1) + px() + Poly::monomial(Rat(1), {1, 1, 0});
  CHECK(positive_part(RatFun(mix), 0, false) == mix);
  CHECK(positive_part(RatFun(mix), 0, true) == Poly::monomial(Rat(1), {1, 1, 0}));
}
