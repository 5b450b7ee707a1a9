// osum: exact solver for linear discrete differential equations over
// Q[x,y][[t]] by the orbit-sum method, with certified positive-part
// extraction.
//
// Usage:
//   osum expand   <file.dde> [--order N]
//   osum kernel   <file.dde>
//   osum orbit    <file.dde>
//   osum orbitsum <file.dde>
//   osum certify  <file.dde> [options]
//   osum solve    <file.dde> [options]
//   osum replay   <report.json> <file.dde>
//
// Options:
//   --order N               series truncation order for oracle checks
//   --weight "a1+b1r:a2+b2r" --radicand D
//                           quadratic order weight (a1+b1*sqrt(D), a2+b2*sqrt(D))
//   --weight-stages "u11,u12;u21,u22"
//                           staged (lexicographic) order weight
//   --parallel              evaluate candidate order regions concurrently
//   --cache-dir DIR         result cache directory (env OSUM_CACHE_DIR)
//   --no-cache              disable the cache
//   --out FILE              write the JSON report to FILE instead of stdout
//
// Exit codes: 0 success/True, 1 Failed, 2 usage or input errors,
// 3 unsupported input or resource budget exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "osum/cache.hpp"
#include "osum/report.hpp"

using namespace osum;

namespace {

struct Options {
  std::string command, file, report_file, out_file;
  int order = -1;
  std::optional<OrderWeight> weight;
  std::string weight_str, stages_str;
  long radicand = 0;
  bool parallel = false;
  bool no_cache = false;
  std::string cache_dir;
};

struct UsageError {
  std::string msg;
};

Rat parse_rat(std::string s, const std::string& what) {
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  Rat q;
  if (s.empty() || q.set_str(s, 10) != 0)
    throw UsageError{"invalid rational '" + s + "' in " + what};
  q.canonicalize();
  return q;
}

// "a", "a+br", "a-br" or "br" with rational a, b
Quad parse_quad(const std::string& s, long D) {
  size_t r = s.find('r');
  if (r == std::string::npos) return Quad(parse_rat(s, "--weight"));
  if (r != s.size() - 1) throw UsageError{"'r' must end a weight component"};
  std::string body = s.substr(0, r);
  // split before the sign of the b-term (not the leading sign, not in n/d)
  size_t split = std::string::npos;
  for (size_t i = 1; i < body.size(); ++i)
    if (body[i] == '+' || body[i] == '-') split = i;
  Rat a(0), b;
  if (split == std::string::npos) {
    b = body.empty() || body == "+" ? Rat(1) : body == "-" ? Rat(-1) : parse_rat(body, "--weight");
  } else {
    a = parse_rat(body.substr(0, split), "--weight");
    std::string bs = body.substr(split);
    b = bs == "+" ? Rat(1) : bs == "-" ? Rat(-1) : parse_rat(bs, "--weight");
  }
  return Quad(a, b, D);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Options parse_args(int argc, char** argv) {
  Options o;
  if (argc < 2) throw UsageError{"missing command"};
  o.command = argv[1];
  std::vector<std::string> pos;
  for (int i = 2; i < argc; ++i) {
    std::string a = argv[i];
    auto need = [&](const char* flag) -> std::string {
      if (i + 1 >= argc) throw UsageError{std::string(flag) + " requires a value"};
      return argv[++i];
    };
    if (a == "--order") {
      try {
        o.order = std::stoi(need("--order"));
      } catch (...) {
        throw UsageError{"--order requires an integer"};
      }
      if (o.order < 0) throw UsageError{"--order must be non-negative"};
    } else if (a == "--weight") {
      o.weight_str = need("--weight");
    } else if (a == "--radicand") {
      try {
        o.radicand = std::stol(need("--radicand"));
      } catch (...) {
        throw UsageError{"--radicand requires an integer"};
      }
    } else if (a == "--weight-stages") {
      o.stages_str = need("--weight-stages");
    } else if (a == "--parallel") {
      o.parallel = true;
    } else if (a == "--no-cache") {
      o.no_cache = true;
    } else if (a == "--cache-dir") {
      o.cache_dir = need("--cache-dir");
    } else if (a == "--out") {
      o.out_file = need("--out");
    } else if (!a.empty() && a[0] == '-') {
      throw UsageError{"unknown option '" + a + "'"};
    } else {
      pos.push_back(a);
    }
  }
  bool is_replay = o.command == "replay";
  size_t want = is_replay ? 2 : 1;
  if (pos.size() != want)
    throw UsageError{is_replay ? "replay needs <report.json> <file.dde>"
                               : "expected exactly one problem file"};
  if (is_replay) {
    o.report_file = pos[0];
    o.file = pos[1];
  } else {
    o.file = pos[0];
  }

  if (!o.weight_str.empty() && !o.stages_str.empty())
    throw UsageError{"--weight and --weight-stages are mutually exclusive"};
  if (!o.weight_str.empty()) {
    auto parts = split(o.weight_str, ':');
    if (parts.size() != 2) throw UsageError{"--weight must be \"w1:w2\""};
    o.weight = OrderWeight::quad(parse_quad(parts[0], o.radicand),
                                 parse_quad(parts[1], o.radicand));
  }
  if (!o.stages_str.empty()) {
    std::vector<std::array<Rat, 2>> stages;
    for (auto& st : split(o.stages_str, ';')) {
      auto c = split(st, ',');
      if (c.size() != 2) throw UsageError{"--weight-stages must be \"u11,u12;u21,u22\""};
      stages.push_back({parse_rat(c[0], "--weight-stages"), parse_rat(c[1], "--weight-stages")});
    }
    o.weight = OrderWeight::stage(stages);
  }
  if (o.cache_dir.empty())
    if (const char* env = std::getenv("OSUM_CACHE_DIR")) o.cache_dir = env;
  if (o.no_cache) o.cache_dir.clear();
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

KernelEquation kernel_of(const Problem& pr) {
  return pr.kernel ? *pr.kernel : to_kernel_form(pr.dde);
}

SolveOptions solve_options(const Options& o) {
  SolveOptions so;
  so.cert.preferred = o.weight;
  so.cert.parallel = o.parallel;
  if (o.order >= 0) {
    so.check_order = o.order;
    so.check_order_algebraic = o.order;
  }
  return so;
}

// result of one command: exit code, JSON document, human rendering
struct Outcome {
  int code = 0;
  std::string json;
  std::string human;
};

Outcome run_expand(const Problem& pr, const Options& o) {
  int N = o.order >= 0 ? o.order : 10;
  auto series = oracle_expand(pr.dde, N);
  std::vector<std::string> rows;
  std::ostringstream hu;
  for (size_t u = 0; u < series.size(); ++u) {
    rows.push_back(js::obj({{"unknown", js::esc(pr.dde.unknowns[u])},
                            {"value", js::esc(series[u].str())}}));
    hu << pr.dde.unknowns[u] << " = " << series[u].str() << "\n";
  }
  return {0,
          js::obj({{"command", js::esc("expand")},
                   {"name", js::esc(pr.name)},
                   {"order", std::to_string(N)},
                   {"series", js::arr(rows)}}),
          hu.str()};
}

Outcome run_kernel(const Problem& pr, const Options&) {
  KernelEquation k = kernel_of(pr);
  bool ok = verify_kernel_form(k, pr.dde, 6);
  std::ostringstream hu;
  hu << "kernel: 1 - t^" << k.r << "*(" << k.S.str() << ")\n";
  hu << "verified: " << (ok ? "true" : "false") << "\n";
  return {ok ? 0 : 1,
          js::obj({{"command", js::esc("kernel")},
                   {"name", js::esc(pr.name)},
                   {"kernel", kernel_json(pr, k)},
                   {"verified", ok ? "true" : "false"}}),
          hu.str()};
}

Outcome run_orbit(const Problem& pr, const Options&) {
  KernelEquation k = kernel_of(pr);
  Orbit orb = compute_orbit(k.S);
  std::ostringstream hu;
  hu << "orbit size: " << orb.elems.size() << "\n";
  hu << "minpoly: " << upoly_str(orb.field->g) << "\n";
  return {0,
          js::obj({{"command", js::esc("orbit")},
                   {"name", js::esc(pr.name)},
                   {"orbit", orbit_json(orb)}}),
          hu.str()};
}

Outcome run_orbitsum(const Problem& pr, const Options&) {
  KernelEquation k = kernel_of(pr);
  Orbit orb = compute_orbit(k.S);
  auto basis = section_free_basis(k, orb);
  std::ostringstream hu;
  hu << "orbit size: " << orb.elems.size() << "\n";
  hu << "section-free dimension: " << basis.size() << "\n";
  return {0,
          js::obj({{"command", js::esc("orbitsum")},
                   {"name", js::esc(pr.name)},
                   {"orbit", orbit_json(orb)},
                   {"orbitsum", orbitsum_json(basis)}}),
          hu.str()};
}

Outcome run_solve(const Problem& pr, const Options& o, const char* command) {
  SolveResult r = solve(pr.dde, pr.kernel, solve_options(o));
  SolveReport rep = build_solve_report(pr, r, command);
  bool ok = std::string(command) == "certify" ? r.cert.success : r.success;
  return {ok ? 0 : 1, rep.json, rep.human};
}

Outcome run_replay(const Problem& pr, const Options& o, const std::string& report_text) {
  JsonValue doc = parse_json(report_text);
  if (!doc.has("certificate"))
    throw EngineError(ErrKind::ParseError, "report has no certificate");
  Certificate cert = certificate_from_json(doc.at("certificate"));
  SolveResult r = solve(pr.dde, pr.kernel, solve_options(o));
  if (r.chosen < 0)
    throw EngineError(ErrKind::UnsupportedSystem, "no usable orbit-sum equation");
  CertifierInput ci;
  ci.m = r.orbit.field->g;
  for (auto& [p1, p2, p3] : r.basis[r.chosen].triples)
    ci.L0.push_back({p1.rep(), p2.rep(), p3.rep()});
  ci.C0 = support_cone_bound(pr.dde);
  bool ok = replay(cert, ci);
  std::ostringstream hu;
  hu << "replay: " << (ok ? "verified" : "rejected") << "\n";
  return {ok ? 0 : 1,
          js::obj({{"command", js::esc("replay")},
                   {"name", js::esc(pr.name)},
                   {"verified", ok ? "true" : "false"}}),
          hu.str()};
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Options o = parse_args(argc, argv);
    std::string problem_text = read_file(o.file);
    std::string report_text = o.command == "replay" ? read_file(o.report_file) : "";

    Cache cache(o.cache_dir);
    std::string key;
    if (cache.enabled()) {
      std::ostringstream cfg;
      cfg << o.command << '\0' << problem_text << '\0' << report_text << '\0' << o.order
          << '\0' << o.weight_str << '\0' << o.radicand << '\0' << o.stages_str << '\0'
          << o.parallel;
      key = content_key(cfg.str());
      if (auto hit = cache.get(key)) {
        size_t nl = hit->find('\n');
        if (nl != std::string::npos) {
          int code = std::stoi(hit->substr(0, nl));
          std::string json = hit->substr(nl + 1);
          if (o.out_file.empty())
            std::cout << json;
          else
            std::ofstream(o.out_file, std::ios::binary) << json;
          std::cerr << "cache: hit\n";
          return code;
        }
      }
    }

    auto t0 = std::chrono::steady_clock::now();
    Problem pr = parse_problem(problem_text);
    Outcome out;
    if (o.command == "expand")
      out = run_expand(pr, o);
    else if (o.command == "kernel")
      out = run_kernel(pr, o);
    else if (o.command == "orbit")
      out = run_orbit(pr, o);
    else if (o.command == "orbitsum")
      out = run_orbitsum(pr, o);
    else if (o.command == "certify" || o.command == "solve")
      out = run_solve(pr, o, o.command.c_str());
    else if (o.command == "replay")
      out = run_replay(pr, o, report_text);
    else
      throw UsageError{"unknown command '" + o.command + "'"};
    auto t1 = std::chrono::steady_clock::now();

    std::string json = out.json + "\n";
    if (o.out_file.empty())
      std::cout << json;
    else
      std::ofstream(o.out_file, std::ios::binary) << json;
    std::cerr << out.human;
    std::cerr << "time: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
              << " ms\n";
    if (cache.enabled()) cache.put(key, std::to_string(out.code) + "\n" + json);
    return out.code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.msg << "\n";
    std::cerr << "run 'osum' with a command: expand | kernel | orbit | orbitsum | certify | "
                 "solve | replay\n";
    return 2;
  } catch (const EngineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
