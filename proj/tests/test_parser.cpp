#include <catch2/catch_amalgamated.hpp>

#include "osum/parser.hpp"
#include "test_util.hpp"

using namespace osum;
using namespace osum::testutil;

static std::string fixture(const std::string& name) {
  return std::string(OSUM_FIXTURE_DIR) + "/" + name;
}

TEST_CASE("parsing the diagonal model reproduces its oracle") {
  Problem p = parse_problem_file(fixture("ex1.dde"));
  REQUIRE(p.dde.unknowns == std::vector<std::string>{"F"});
  CHECK(!p.kernel);
  auto a = oracle_expand(p.dde, 8);
  auto b = oracle_expand(ex1_dde(), 8);
  CHECK(a[0] == b[0]);
  KernelEquation k1 = to_kernel_form(p.dde);
  KernelEquation k2 = to_kernel_form(ex1_dde());
  CHECK(k1.S == k2.S);
  CHECK(k1.r == k2.r);
}

TEST_CASE("parsing the large-step system reproduces kernel and oracle") {
  Problem p = parse_problem_file(fixture("ex3.dde"));
  REQUIRE(p.dde.unknowns.size() == 2);
  auto a = oracle_expand(p.dde, 6);
  auto b = oracle_expand(ex3_dde(), 6);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  REQUIRE(p.kernel);
  KernelEquation ref = ex3_kernel();
  CHECK(p.kernel->S == ref.S);
  CHECK(p.kernel->r == ref.r);
  CHECK(p.kernel->unknown == ref.unknown);
  CHECK(p.kernel->rhs == ref.rhs);
  REQUIRE(p.kernel->sections.size() == ref.sections.size());
  for (size_t i = 0; i < ref.sections.size(); ++i) {
    CHECK(p.kernel->sections[i].first == ref.sections[i].first);
    CHECK((int)p.kernel->sections[i].second.kind == (int)ref.sections[i].second.kind);
    CHECK(p.kernel->sections[i].second.unknown == ref.sections[i].second.unknown);
    CHECK(p.kernel->sections[i].second.i == ref.sections[i].second.i);
    CHECK(p.kernel->sections[i].second.j == ref.sections[i].second.j);
  }
  // the supplied kernel form is consistent with the system
  CHECK(verify_kernel_form(*p.kernel, p.dde, 6));
}

TEST_CASE("print and parse round-trip on all fixtures") {
  for (const char* f : {"ex1.dde", "ex3.dde", "trivial.dde", "symmetric.dde"}) {
    Problem p = parse_problem_file(fixture(f));
    std::string s1 = print_problem(p);
    Problem q = parse_problem(s1);
    std::string s2 = print_problem(q);
    CHECK(s1 == s2);
    CHECK(q.dde.unknowns == p.dde.unknowns);
    REQUIRE(q.dde.eqs.size() == p.dde.eqs.size());
    auto oa = oracle_expand(p.dde, 5), ob = oracle_expand(q.dde, 5);
    for (size_t u = 0; u < oa.size(); ++u) CHECK(oa[u] == ob[u]);
    CHECK(q.kernel.has_value() == p.kernel.has_value());
    if (p.kernel) CHECK(q.kernel->S == p.kernel->S);
  }
}

TEST_CASE("expression grammar corner cases") {
  std::string base = "unknowns: F\n";
  // rational literals, powers, unary minus, nesting
  Problem p = parse_problem(base + "eq: F = 2 + -x*y^2 + t*(1/2)*Dx(Dx(F))\n");
  CHECK(p.dde.eqs[0].free == Poly(2) - Poly::var(0) * Poly::var(1, 2));
  REQUIRE(p.dde.eqs[0].terms.size() == 1);
  CHECK(p.dde.eqs[0].terms[0].k == 2);
  CHECK(p.dde.eqs[0].terms[0].coeff == Poly(Rat(1) / 2));
  // like delta terms merge
  Problem q = parse_problem(base + "eq: F = t*x*F + t*y*F\n");
  REQUIRE(q.dde.eqs[0].terms.size() == 1);
  CHECK(q.dde.eqs[0].terms[0].coeff == Poly::var(0) + Poly::var(1));
  // Dx commutes past y-coefficients but not x-coefficients
  Problem r = parse_problem(base + "eq: F = t*Dx(y*F)\n");
  CHECK(r.dde.eqs[0].terms[0].coeff == Poly::var(1));
  CHECK(r.dde.eqs[0].terms[0].k == 1);
}

static int parse_error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const EngineError& e) {
    REQUIRE(e.kind() == ErrKind::ParseError);
    std::string w = e.what();
    size_t at = w.find("line ");
    REQUIRE(at != std::string::npos);
    REQUIRE(w.find("column ") != std::string::npos);
    return std::stoi(w.substr(at + 5));
  }
  FAIL("expected a parse error");
  return -1;
}

TEST_CASE("parse errors carry line and column information") {
  CHECK(parse_error_line("unknowns: F\neq: F = 1 + $\n") == 2);
  CHECK(parse_error_line("unknowns: F\neq: F = G\n") == 2);
  CHECK(parse_error_line("unknowns: F\neq: F = t*F*F\n") == 2);
  CHECK(parse_error_line("unknowns: F\neq: F = F\n") == 2);        // missing t factor
  CHECK(parse_error_line("unknowns: F\neq: F = x^-1 + t*F\n") == 2);
  CHECK(parse_error_line("unknowns: F\neq: F = t*Dx(x*F)\n") == 2);
  CHECK(parse_error_line("unknowns: F\neq: F = 1 + t*F\nbogus line\n") == 3);
  CHECK(parse_error_line("unknowns: F\n") == 1);  // no equation
}
