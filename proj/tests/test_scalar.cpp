#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "osum/rat.hpp"

using namespace osum;

TEST_CASE("rational helpers") {
  CHECK(rat_str(frac(3, 6)) == "1/2");
  CHECK(rat_str(frac(-4, 2)) == "-2");
  CHECK(sgn(Rat(-7, 3)) == -1);
  CHECK(rat_abs(Rat(-7, 3)) == Rat(7, 3));
  CHECK(*rat_sqrt(Rat(9, 4)) == Rat(3, 2));
  CHECK(!rat_sqrt(Rat(2)).has_value());
  CHECK(!rat_sqrt(Rat(-1)).has_value());
  auto [s, r] = squarefree_decompose(Int(72));
  CHECK(s == 2);
  CHECK(r == 6);
}

TEST_CASE("quad sign is exact") {
  CHECK(quad_sign(Quad(Rat(0), Rat(0), 2)) == 0);
  CHECK(quad_sign(Quad(Rat(-1), Rat(1), 2)) == 1);
  CHECK(quad_sign(Quad(Rat(3), Rat(-2), 2)) == 1);
  CHECK(quad_sign(Quad(Rat(-3), Rat(2), 2)) == -1);
  CHECK(quad_sign(Quad(Rat(7, 5), Rat(-1), 2)) == -1);  // 7/5 < sqrt 2
  CHECK(quad_sign(Quad(Rat(3, 2), Rat(-1), 2)) == 1);   // 3/2 > sqrt 2
}

TEST_CASE("quad field arithmetic") {
  Quad a(Rat(1), Rat(2), 2), b(Rat(3), Rat(-1), 2);
  CHECK(a * b == Quad(Rat(-1), Rat(5), 2));
  CHECK(a + b == Quad(Rat(4), Rat(1), 2));
  CHECK(a * a.inv() == Quad(Rat(1)));
  CHECK((a / b) * b == a);
  CHECK_THROWS(Quad(Rat(1), Rat(1), 2) * Quad(Rat(1), Rat(1), 3));
  CHECK(Quad(Rat(5)) * Quad(Rat(0), Rat(1), 2) == Quad(Rat(0), Rat(5), 2));
}

TEST_CASE("quad sqrt within the field") {
  // (1 + sqrt2)^2 = 3 + 2 sqrt2
  auto r = Quad(Rat(3), Rat(2), 2).sqrt_same_field();
  REQUIRE(r.has_value());
  CHECK(*r * *r == Quad(Rat(3), Rat(2), 2));
  CHECK(r->sign() > 0);
  CHECK(!Quad(Rat(0), Rat(1), 2).sqrt_same_field().has_value());
  CHECK(*Quad(Rat(9, 4)).sqrt_same_field() == Quad(Rat(3, 2)));
}

TEST_CASE("quad total order on random samples") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> d(-8, 8);
  std::vector<Quad> pts;
  for (int i = 0; i < 60; ++i)
    pts.push_back(Quad(frac(d(rng), 1 + std::abs(d(rng))), Rat(d(rng)), 2));
  for (auto& p : pts)
    for (auto& q : pts) {
      int s1 = (p - q).sign(), s2 = (q - p).sign();
      CHECK(s1 == -s2);
      if (s1 == 0) CHECK(p == q);
    }
}
