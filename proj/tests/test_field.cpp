#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "osum/field.hpp"

using namespace osum;

namespace {
const Poly X = Poly::var(0), Y = Poly::var(1);

UPoly<RatFun> upoly(std::vector<RatFun> c) { return UPoly<RatFun>(std::move(c)); }

MVPoly make_mv(int nv, std::vector<std::pair<Expv, RatFun>> ts) {
  MVPoly p(nv);
  for (auto& [e, c] : ts) p.add_term(e, c);
  return p;
}

bool reduces_to_zero(const MVPoly& p, const std::vector<MVPoly>& basis) {
  return mv_reduce(p, basis).is_zero();
}
}  // namespace

TEST_CASE("groebner: triangular inputs stay triangular") {
  // vars A > B; {A^2 - x, B - A}
  auto g = gb_lex({make_mv(2, {{{2, 0}, 1}, {{0, 0}, RatFun(-X)}}),
                   make_mv(2, {{{0, 1}, 1}, {{1, 0}, -1}})});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == make_mv(2, {{{0, 2}, 1}, {{0, 0}, RatFun(-X)}}));  // B^2 - x
  CHECK(g[1] == make_mv(2, {{{1, 0}, 1}, {{0, 1}, -1}}));          // A - B
}

TEST_CASE("groebner: forced substitution") {
  // {A - 1, A*B - 1} -> {A - 1, B - 1}
  auto g = gb_lex({make_mv(2, {{{1, 0}, 1}, {{0, 0}, -1}}),
                   make_mv(2, {{{1, 1}, 1}, {{0, 0}, -1}})});
  REQUIRE(g.size() == 2);
  CHECK(g[0] == make_mv(2, {{{0, 1}, 1}, {{0, 0}, -1}}));
  CHECK(g[1] == make_mv(2, {{{1, 0}, 1}, {{0, 0}, -1}}));
}

TEST_CASE("groebner: S-polynomials of output reduce to zero") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(0, 2), c(-3, 3), n(1, 2);
  int done = 0;
  for (int iter = 0; done < 30 && iter < 400; ++iter) {
    std::vector<MVPoly> gens;
    for (int k = 0; k < 2; ++k) {
      MVPoly p(2);
      int terms = n(rng) + 1;
      for (int i = 0; i < terms; ++i) p.add_term({e(rng), e(rng)}, Rat(c(rng)));
      if (!p.is_zero()) gens.push_back(p);
    }
    if (gens.size() < 2) continue;
    std::vector<MVPoly> g;
    try {
      g = gb_lex(gens, 20000);
    } catch (const EngineError&) {
      continue;
    }
    for (size_t i = 0; i < g.size(); ++i)
      for (size_t j = i + 1; j < g.size(); ++j) CHECK(reduces_to_zero(spoly(g[i], g[j]), g));
    ++done;
  }
  CHECK(done == 30);
}

TEST_CASE("shape_split: single quadratic") {
  // X^2 - x
  auto f = shape_split({upoly({RatFun(-X), RatFun(0), RatFun(1)})});
  CHECK(f->deg() == 2);
  REQUIRE(f->rootExprs.size() == 2);
  // both roots square to x, and are negatives of each other
  for (auto& r : f->rootExprs) {
    auto sq = UPoly<RatFun>::divmod(r * r, f->g).second;
    CHECK(sq == upoly({RatFun(X)}));
  }
  CHECK(UPoly<RatFun>::divmod(f->rootExprs[0] + f->rootExprs[1], f->g).second.is_zero());
}

TEST_CASE("shape_split: two quadratics give degree 4") {
  auto f = shape_split({upoly({RatFun(-X), RatFun(0), RatFun(1)}),
                        upoly({RatFun(-Y), RatFun(0), RatFun(1)})});
  CHECK(f->deg() == 4);
  REQUIRE(f->rootExprs.size() == 4);
  for (int q = 0; q < 4; ++q) {
    auto sq = UPoly<RatFun>::divmod(f->rootExprs[q] * f->rootExprs[q], f->g).second;
    bool isx = sq == upoly({RatFun(X)});
    bool isy = sq == upoly({RatFun(Y)});
    CHECK((isx || isy));
    CHECK(f->rootIndex[q].first == (isy ? 1 : 0));
  }
  // eliminant squarefree
  CHECK(gcd_upoly(f->g, f->g.derivative()).deg() == 0);
}

TEST_CASE("shape_split: large-step adjacency quadratic normalizes to the minimal polynomial") {
  // X^2 - 4x^3y^2 - (x + y + xy + xy^2)^2
  Poly q = X + Y + X * Y + X * Y * Y;
  Poly m0 = 4 * Rat(1) * X.pow(3) * Y * Y + q * q;
  auto f = normalize_quadratic(shape_split({upoly({RatFun(-m0), RatFun(0), RatFun(1)})}));
  CHECK(f->deg() == 2);
  CHECK(f->g.coeff(1).is_zero());
  CHECK(-f->g.coeff(0) == RatFun(m0));
  for (auto& r : f->rootExprs) {
    auto sq = UPoly<RatFun>::divmod(r * r, f->g).second;
    CHECK(sq == upoly({RatFun(m0)}));
  }
}

TEST_CASE("field arithmetic and inversion") {
  // normalized so that the primitive element satisfies Z^2 = x
  auto f = normalize_quadratic(shape_split({upoly({RatFun(-X), RatFun(0), RatFun(1)})}));
  FieldElem z = FieldElem::primitive(f);
  CHECK(z * z == FieldElem(RatFun(X)));
  CHECK(z.inv() == z / FieldElem(RatFun(X)));
  CHECK(z * z.inv() == FieldElem(1));
  // (1+Z)^-1 = (1-Z)/(1-x)
  FieldElem e = FieldElem(1) + z;
  FieldElem expect = (FieldElem(1) - z) * FieldElem(RatFun(Poly(1), Poly(1) - X));
  CHECK(e.inv() == expect);
  CHECK(e * e.inv() == FieldElem(1));
}

TEST_CASE("zero divisor inversion splits the eliminant") {
  // reducible eliminant Z^2 - 1, not produced by shape_split: build directly
  auto f = std::make_shared<SplittingField>();
  f->g = upoly({RatFun(-1), RatFun(0), RatFun(1)});
  FieldPtr fp = f;
  FieldElem e = FieldElem::primitive(fp) - FieldElem(1);  // Z - 1
  auto r = field_inv(e);
  REQUIRE(std::holds_alternative<Split>(r));
  auto s = std::get<Split>(r);
  CHECK(s.f1 * s.f2 == fp->g);
  CHECK((s.f1 == upoly({RatFun(-1), RatFun(1)}) || s.f2 == upoly({RatFun(-1), RatFun(1)})));
  // restricting to the branch Z = 1 makes the element zero
  auto b1 = restrict_field(fp, upoly({RatFun(-1), RatFun(1)}));
  CHECK(restrict_elem(e, b1).is_zero());
  // on the other branch it is invertible
  auto b2 = restrict_field(fp, upoly({RatFun(1), RatFun(1)}));
  FieldElem e2 = restrict_elem(e, b2);
  CHECK(e2 * e2.inv() == FieldElem(1));
}

TEST_CASE("field axioms under dynamic evaluation, randomized") {
  auto f = shape_split({upoly({RatFun(-X), RatFun(0), RatFun(1)}),
                        upoly({RatFun(-Y), RatFun(0), RatFun(1)})});
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> c(-3, 3);
  int done = 0;
  for (int i = 0; done < 25 && i < 200; ++i) {
    UPoly<RatFun> pa, pb;
    for (int d = 0; d < 4; ++d) {
      pa.set_coeff(d, RatFun(Rat(c(rng))));
      pb.set_coeff(d, RatFun(Rat(c(rng))));
    }
    FieldElem a(f, pa), b(f, pb);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK((a * b) * b.inv() == a);
    CHECK((a + b) - b == a);
    CHECK(a * (b + FieldElem(1)) == a * b + a);
    ++done;
  }
  CHECK(done == 25);
}

TEST_CASE("resultant against a quadratic") {
  // Res_Z(Z^2 - x, X^2 - Z) = (X^2)^2 - x = X^4 - x
  auto r = resultant_quadratic(upoly({RatFun(-X), RatFun(0), RatFun(1)}),
                               upoly({RatFun(0), RatFun(1)}));
  UPoly<RatFun> want;
  want.set_coeff(4, RatFun(1));
  want.set_coeff(0, RatFun(-X));
  CHECK(r == want);
  // Res_Z(Z^2 - x, X^2 - (Z + y)) = (X^2 - y)^2 - x
  auto r2 = resultant_quadratic(upoly({RatFun(-X), RatFun(0), RatFun(1)}),
                                upoly({RatFun(Y), RatFun(1)}));
  UPoly<RatFun> w2;
  w2.set_coeff(4, RatFun(1));
  w2.set_coeff(2, RatFun(-2 * Rat(1) * Y));
  w2.set_coeff(0, RatFun(Y * Y - X));
  CHECK(r2 == w2);
}
