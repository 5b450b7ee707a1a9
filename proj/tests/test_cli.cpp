#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace {

std::string bin() { return std::string(OSUM_BIN_DIR) + "/osum"; }
std::string fixture(const std::string& name) {
  return std::string(OSUM_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/osum_test_" + name;
  std::ofstream(path, std::ios::binary | std::ios::trunc) << content;
  return path;
}

void audit_no_floats(const std::string& s) {
  // no floating point tokens: no digit.digit, no exponent-of-ten literals
  static const std::regex float_re("[0-9]\\.[0-9]|[0-9][eE][+-]?[0-9]");
  CHECK(!std::regex_search(s, float_re));
}

}  // namespace

TEST_CASE("expand command reports the oracle series") {
  auto r = run("expand " + fixture("ex3.dde") + " --order 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"unknown\":\"F0\"") != std::string::npos);
  CHECK(r.out.find("x*t^2 + y*t^2 + t^2 + 1") != std::string::npos);
  audit_no_floats(r.out);
}

TEST_CASE("orbit command reports six elements and the eliminant") {
  auto r = run("orbit " + fixture("ex3.dde"));
  CHECK(r.code == 0);
  CHECK(r.out.find("\"size\":6") != std::string::npos);
  CHECK(r.out.find("X^2") != std::string::npos);
  CHECK(r.out.find("4*x^3*y^2") != std::string::npos);
  audit_no_floats(r.out);
}

TEST_CASE("solve command succeeds on all fixtures with exact reports") {
  for (const char* f : {"trivial.dde", "ex1.dde", "symmetric.dde", "ex3.dde"}) {
    auto r = run("solve " + fixture(f));
    INFO(f);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"status\":\"success\"") != std::string::npos);
    audit_no_floats(r.out);
  }
}

TEST_CASE("solve reports a full oracle match on the diagonal model") {
  auto r = run("solve " + fixture("ex1.dde") + " --order 10");
  CHECK(r.code == 0);
  // all ten orders agree
  CHECK(r.out.find("\"match\":false") == std::string::npos);
  size_t rows = 0;
  for (size_t p = r.out.find("\"match\":true"); p != std::string::npos;
       p = r.out.find("\"match\":true", p + 1))
    ++rows;
  CHECK(rows == 10);
}

TEST_CASE("weight options select the published embedding") {
  auto r = run("solve " + fixture("ex3.dde") + " --weight \"0+1r:1/2\" --radicand 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"e\":[\"3/2\",\"1\"]") != std::string::npos);
  auto s = run("solve " + fixture("ex3.dde") + " --weight-stages \"3,2;-2,3\"");
  CHECK(s.code == 0);
  CHECK(s.out.find("\"status\":\"success\"") != std::string::npos);
}

TEST_CASE("replay verifies a solve report and rejects a tampered one") {
  std::string rep = "/tmp/osum_test_replay.json";
  auto r = run("solve " + fixture("ex3.dde") + " --out " + rep);
  REQUIRE(r.code == 0);
  auto ok = run("replay " + rep + " " + fixture("ex3.dde"));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"verified\":true") != std::string::npos);
  // flip one vertex coordinate in the stored certificate
  std::ifstream in(rep);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string doc = ss.str();
  std::string pat = "\"v3\":[\"-3/2\"";
  size_t at = doc.find(pat);
  REQUIRE(at != std::string::npos);
  doc.replace(at, pat.size(), "\"v3\":[\"99/2\"");
  std::string bad = write_temp("replay_bad.json", doc);
  auto rej = run("replay " + bad + " " + fixture("ex3.dde"));
  CHECK(rej.code == 1);
  CHECK(rej.out.find("\"verified\":false") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage, parse and budget errors") {
  CHECK(run("bogus " + fixture("ex1.dde")).code == 2);
  CHECK(run("solve").code == 2);
  CHECK(run("solve /nonexistent.dde").code == 2);
  std::string bad = write_temp("bad.dde", "unknowns: F\neq: F = $\n");
  CHECK(run("solve " + bad).code == 2);
  // a kernel whose orbit does not close within the coordinate-size budget
  std::string div = write_temp(
      "divergent.dde",
      "unknowns: F\n"
      "eq: F = 1 + t*2*x*y*F + t*2*x*Dy(F) + t*y*Dx(F) + t*2*Dy(F) + t*Dx(F)\n");
  CHECK(run("solve " + div).code == 3);
}

TEST_CASE("kernel command verifies supplied kernel blocks") {
  CHECK(run("kernel " + fixture("ex3.dde")).code == 0);
  CHECK(run("kernel " + fixture("ex1.dde")).code == 0);
  // corrupted kernel block: wrong sign on S
  std::ifstream in(fixture("ex3.dde"));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string doc = ss.str();
  size_t at = doc.find("S = ");
  REQUIRE(at != std::string::npos);
  doc.insert(at + 4, "2*");
  std::string bad = write_temp("badkernel.dde", doc);
  auto r = run("kernel " + bad);
  CHECK(r.code == 1);
  CHECK(r.out.find("\"verified\":false") != std::string::npos);
}

TEST_CASE("reports are byte-identical across cache and parallel settings") {
  std::string cdir = "/tmp/osum_test_cache";
  std::system(("rm -rf " + cdir).c_str());
  for (const char* f : {"trivial.dde", "ex1.dde", "symmetric.dde", "ex3.dde"}) {
    INFO(f);
    auto cold = run("solve " + fixture(f) + " --cache-dir " + cdir);
    auto warm = run("solve " + fixture(f) + " --cache-dir " + cdir);
    auto none = run("solve " + fixture(f) + " --no-cache");
    auto par = run("solve " + fixture(f) + " --parallel --no-cache");
    CHECK(cold.code == 0);
    CHECK(warm.code == cold.code);
    CHECK(warm.out == cold.out);
    CHECK(none.out == cold.out);
    CHECK(par.out == cold.out);
  }
  // a modified problem file yields a different key, not a stale hit
  std::string v1 = write_temp("mod.dde", "unknowns: F\neq: F = 1 + t*(x + y)*F\n");
  auto r1 = run("solve " + v1 + " --cache-dir " + cdir);
  std::string v2 = write_temp("mod.dde", "unknowns: F\neq: F = 2 + t*(x + y)*F\n");
  auto r2 = run("solve " + v2 + " --cache-dir " + cdir);
  CHECK(r1.out != r2.out);
  CHECK(r2.out.find("\"status\":\"success\"") != std::string::npos);
}
