#pragma once

// Machine-readable JSON reports (exact rationals only, no floating point),
// their human-readable text renderings, and certificate round-tripping for
// the replay command.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "osum/certifier.hpp"
#include "osum/parser.hpp"

namespace osum {

// ---------------------------------------------------------------------------
// JSON writing

namespace js {

inline std::string esc(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    switch (c) {
      case '"': r += "\\\""; break;
      case '\\': r += "\\\\"; break;
      case '\n': r += "\\n"; break;
      case '\t': r += "\\t"; break;
      default: r += c;
    }
  }
  return r + "\"";
}

inline std::string arr(const std::vector<std::string>& items) {
  std::string r = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) r += ",";
    r += items[i];
  }
  return r + "]";
}

inline std::string obj(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string r = "{";
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) r += ",";
    r += esc(fields[i].first) + ":" + fields[i].second;
  }
  return r + "}";
}

}  // namespace js

inline std::string rat_json(const Rat& q) { return js::esc(rat_str(q)); }

inline std::string quad_json(const Quad& q) {
  return js::obj({{"a", rat_json(q.a)},
                  {"b", rat_json(q.b)},
                  {"D", std::to_string(q.D)}});
}

inline std::string qexp_json(const QExp& e) {
  return js::arr({rat_json(e[0]), rat_json(e[1])});
}

inline std::string cone_json(const Cone& c) {
  std::vector<std::string> gens;
  for (auto& g : c.gens()) {
    std::vector<std::string> coords;
    for (auto& v : g) coords.push_back(js::esc(v.get_str()));
    gens.push_back(js::arr(coords));
  }
  return js::obj({{"dim", std::to_string(c.dim())}, {"gens", js::arr(gens)}});
}

inline std::string weight_json(const OrderWeight& w) {
  if (w.quad_form)
    return js::obj({{"form", js::esc("quad")},
                    {"w1", quad_json(w.w1)},
                    {"w2", quad_json(w.w2)}});
  std::vector<std::string> st;
  for (auto& u : w.stages) st.push_back(js::arr({rat_json(u[0]), rat_json(u[1])}));
  return js::obj({{"form", js::esc("stages")}, {"stages", js::arr(st)}});
}

inline std::string encoding_json(const PuiseuxEncoding& e) {
  std::vector<std::string> terms;
  for (auto& t : e.terms())
    terms.push_back(js::obj({{"e", qexp_json(t.e)}, {"c", quad_json(t.c)}}));
  std::vector<std::pair<std::string, std::string>> f = {
      {"terms", js::arr(terms)}, {"exact", e.is_zero() || e.is_exact() ? "true" : "false"}};
  if (!e.is_exact()) {
    f.push_back({"tail_vertex", qexp_json(e.tail_vertex())});
    f.push_back({"tail_cone", cone_json(e.tail_cone())});
  }
  return js::obj(f);
}

inline std::string upoly_str(const UPoly<RatFun>& p, const std::string& var = "X") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = p.deg(); d >= 0; --d) {
    const RatFun& c = p.coeff(d);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (d == 0) {
      os << "(" << c.str() << ")";
      continue;
    }
    if (!(c == RatFun(1))) os << "(" << c.str() << ")*";
    os << var;
    if (d > 1) os << "^" << d;
  }
  return os.str();
}

inline std::string certificate_json(const Certificate& c) {
  std::vector<std::string> triples;
  for (auto& tc : c.triples) {
    triples.push_back(js::obj({{"zero_term", tc.zero_term ? "true" : "false"},
                               {"v1", qexp_json(tc.v1)},
                               {"v2", qexp_json(tc.v2)},
                               {"v3", qexp_json(tc.v3)},
                               {"cv1", cone_json(tc.cv1)},
                               {"cv2", cone_json(tc.cv2)},
                               {"cv3", cone_json(tc.cv3)},
                               {"cprime", cone_json(tc.cprime)},
                               {"empty", tc.empty ? "true" : "false"}}));
  }
  std::vector<std::string> attempts;
  for (auto& a : c.attempts) attempts.push_back(js::esc(a));
  return js::obj({{"success", c.success ? "true" : "false"},
                  {"region_index", std::to_string(c.region_index)},
                  {"root_index", std::to_string(c.root_index)},
                  {"region", cone_json(c.region)},
                  {"order_cone", cone_json(c.order_cone)},
                  {"witness", weight_json(c.witness)},
                  {"phi", encoding_json(c.phi)},
                  {"triples", js::arr(triples)},
                  {"attempts", js::arr(attempts)}});
}

// ---------------------------------------------------------------------------
// minimal strict JSON reading (for replay); numbers are kept as raw text

struct JsonValue {
  enum Kind { Null, Bool, Num, Str, Arr, Obj } kind = Null;
  bool b = false;
  std::string text;  // Num: raw spelling; Str: decoded contents
  std::vector<JsonValue> items;
  std::vector<std::pair<std::string, JsonValue>> fields;

  const JsonValue& at(const std::string& key) const {
    for (auto& [k, v] : fields)
      if (k == key) return v;
    throw EngineError(ErrKind::ParseError, "missing JSON field '" + key + "'");
  }
  bool has(const std::string& key) const {
    for (auto& [k, v] : fields)
      if (k == key) return true;
    return false;
  }
};

namespace js {

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  JsonValue parse() {
    JsonValue v = value();
    ws();
    if (i_ != s_.size()) err("trailing JSON input");
    return v;
  }

 private:
  [[noreturn]] void err(const std::string& m) {
    throw EngineError(ErrKind::ParseError, "JSON: " + m);
  }
  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t' || s_[i_] == '\r'))
      ++i_;
  }
  char peek() {
    if (i_ >= s_.size()) err("unexpected end of input");
    return s_[i_];
  }
  void expect(char c) {
    if (peek() != c) err(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string string_lit() {
    expect('"');
    std::string r;
    while (true) {
      char c = peek();
      ++i_;
      if (c == '"') return r;
      if (c == '\\') {
        char e = peek();
        ++i_;
        switch (e) {
          case '"': r += '"'; break;
          case '\\': r += '\\'; break;
          case 'n': r += '\n'; break;
          case 't': r += '\t'; break;
          default: err("unsupported escape");
        }
      } else {
        r += c;
      }
    }
  }
  JsonValue value() {
    ws();
    char c = peek();
    JsonValue v;
    if (c == '{') {
      ++i_;
      v.kind = JsonValue::Obj;
      ws();
      if (peek() == '}') {
        ++i_;
        return v;
      }
      while (true) {
        ws();
        std::string k = string_lit();
        ws();
        expect(':');
        v.fields.push_back({k, value()});
        ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        expect('}');
        return v;
      }
    }
    if (c == '[') {
      ++i_;
      v.kind = JsonValue::Arr;
      ws();
      if (peek() == ']') {
        ++i_;
        return v;
      }
      while (true) {
        v.items.push_back(value());
        ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        expect(']');
        return v;
      }
    }
    if (c == '"') {
      v.kind = JsonValue::Str;
      v.text = string_lit();
      return v;
    }
    if (c == 't' || c == 'f') {
      const char* w = c == 't' ? "true" : "false";
      for (const char* p = w; *p; ++p) expect(*p);
      v.kind = JsonValue::Bool;
      v.b = c == 't';
      return v;
    }
    if (c == 'n') {
      for (const char* p = "null"; *p; ++p) expect(*p);
      return v;
    }
    v.kind = JsonValue::Num;
    while (i_ < s_.size() && (std::isdigit((unsigned char)s_[i_]) || s_[i_] == '-')) {
      v.text += s_[i_];
      ++i_;
    }
    if (v.text.empty()) err("unexpected character");
    return v;
  }
  const std::string& s_;
  size_t i_ = 0;
};

}  // namespace js

inline JsonValue parse_json(const std::string& s) { return js::Reader(s).parse(); }

inline Rat rat_from_str(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0)
    throw EngineError(ErrKind::ParseError, "bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

inline QExp qexp_from_json(const JsonValue& v) {
  if (v.kind != JsonValue::Arr || v.items.size() != 2)
    throw EngineError(ErrKind::ParseError, "bad exponent pair");
  return {rat_from_str(v.items[0].text), rat_from_str(v.items[1].text)};
}

inline Cone cone_from_json(const JsonValue& v) {
  int dim = std::stoi(v.at("dim").text);
  std::vector<QVec> gens;
  for (auto& g : v.at("gens").items) {
    QVec q;
    for (auto& c : g.items) q.push_back(rat_from_str(c.text));
    if ((int)q.size() != dim) throw EngineError(ErrKind::ParseError, "bad cone generator");
    gens.push_back(q);
  }
  return Cone(dim, gens);
}

inline Certificate certificate_from_json(const JsonValue& v) {
  Certificate c;
  c.success = v.at("success").b;
  c.region_index = std::stoi(v.at("region_index").text);
  c.root_index = std::stoi(v.at("root_index").text);
  c.region = cone_from_json(v.at("region"));
  c.order_cone = cone_from_json(v.at("order_cone"));
  for (auto& t : v.at("triples").items) {
    TripleCert tc;
    tc.zero_term = t.at("zero_term").b;
    tc.v1 = qexp_from_json(t.at("v1"));
    tc.v2 = qexp_from_json(t.at("v2"));
    tc.v3 = qexp_from_json(t.at("v3"));
    tc.cv1 = cone_from_json(t.at("cv1"));
    tc.cv2 = cone_from_json(t.at("cv2"));
    tc.cv3 = cone_from_json(t.at("cv3"));
    tc.cprime = cone_from_json(t.at("cprime"));
    tc.empty = t.at("empty").b;
    c.triples.push_back(std::move(tc));
  }
  for (auto& a : v.at("attempts").items) c.attempts.push_back(a.text);
  return c;
}

// ---------------------------------------------------------------------------
// report documents

inline std::string kernel_json(const Problem& pr, const KernelEquation& k) {
  std::vector<std::string> secs;
  for (auto& [c, s] : k.sections) {
    const char* kind = s.kind == SectionKind::XSection   ? "xsec"
                       : s.kind == SectionKind::YSection ? "ysec"
                                                         : "at";
    secs.push_back(js::obj({{"coeff", js::esc(c.str())},
                            {"kind", js::esc(kind)},
                            {"unknown", js::esc(pr.dde.unknowns[s.unknown])},
                            {"i", std::to_string(s.i)},
                            {"j", std::to_string(s.j)}}));
  }
  return js::obj({{"S", js::esc(k.S.str())},
                  {"r", std::to_string(k.r)},
                  {"unknown", js::esc(pr.dde.unknowns[k.unknown])},
                  {"rhs", js::esc(k.rhs.str())},
                  {"sections", js::arr(secs)}});
}

inline std::string orbit_json(const Orbit& o) {
  std::vector<std::string> elems;
  for (auto& el : o.elems) {
    auto coord = [](const FieldElem& e) {
      std::vector<std::string> cs;
      for (auto& c : e.rep().coeffs()) cs.push_back(js::esc(c.str()));
      return js::arr(cs);
    };
    elems.push_back(js::arr({coord(el.p1), coord(el.p2)}));
  }
  return js::obj({{"size", std::to_string(o.elems.size())},
                  {"extension_degree", std::to_string(o.field->deg())},
                  {"minpoly", js::esc(upoly_str(o.field->g))},
                  {"elements", js::arr(elems)}});
}

inline std::string orbitsum_json(const std::vector<OrbitSumEquation>& basis) {
  std::vector<std::string> eqs;
  for (auto& e : basis) {
    std::vector<std::string> triples;
    for (auto& [p1, p2, p3] : e.triples)
      triples.push_back(js::arr({js::esc(upoly_str(p1.rep(), "z")),
                                 js::esc(upoly_str(p2.rep(), "z")),
                                 js::esc(upoly_str(p3.rep(), "z"))}));
    eqs.push_back(js::obj({{"triples", js::arr(triples)},
                           {"rhs", js::esc(upoly_str(e.rhs.rep(), "z"))}}));
  }
  return js::arr(eqs);
}

// per-order comparison of the certified positive part against the oracle
inline std::string oracle_table_json(const Poly& pos, const Poly& oracle, int N, int& agree) {
  std::vector<std::string> rows;
  agree = 0;
  for (int n = 1; n <= N; ++n) {
    auto slice = [&](const Poly& p) {
      Poly r;
      for (auto& [e, c] : p.terms())
        if (e[2] == n) r.add_term(e, c);
      return r;
    };
    bool m = slice(pos) == slice(oracle);
    if (m) ++agree;
    rows.push_back(js::obj({{"order", std::to_string(n)}, {"match", m ? "true" : "false"}}));
  }
  return js::arr(rows);
}

struct SolveReport {
  std::string json;
  std::string human;
};

inline SolveReport build_solve_report(const Problem& pr, const SolveResult& r,
                                      const char* command) {
  std::vector<std::pair<std::string, std::string>> f;
  f.push_back({"command", js::esc(command)});
  f.push_back({"name", js::esc(pr.name)});
  f.push_back({"status", js::esc(r.success ? "success" : "failed")});
  f.push_back({"stage", js::esc(r.stage)});
  if (!r.diagnostic.empty()) f.push_back({"diagnostic", js::esc(r.diagnostic)});
  std::ostringstream hu;
  hu << "problem: " << pr.name << "\n";
  hu << "status: " << (r.success ? "success" : "failed") << " (stage: " << r.stage << ")\n";
  if (!r.diagnostic.empty()) hu << "diagnostic: " << r.diagnostic << "\n";
  if (!r.kernel.S.is_zero()) {
    f.push_back({"kernel", kernel_json(pr, r.kernel)});
    hu << "kernel: 1 - t^" << r.kernel.r << "*(" << r.kernel.S.str() << ")\n";
  }
  if (r.orbit.field) {
    f.push_back({"orbit", orbit_json(r.orbit)});
    hu << "orbit size: " << r.orbit.elems.size() << "\n";
    hu << "minpoly: " << upoly_str(r.orbit.field->g) << "\n";
  }
  if (!r.basis.empty()) {
    f.push_back({"orbitsum", orbitsum_json(r.basis)});
    f.push_back({"chosen", std::to_string(r.chosen)});
    hu << "section-free dimension: " << r.basis.size() << "\n";
  }
  if (r.stage == "check" || r.stage == "done" || r.stage == "certify") {
    f.push_back({"certificate", certificate_json(r.cert)});
    hu << "certificate: " << (r.cert.success ? "True" : "Failed") << "\n";
  }
  if (r.rhs_rational && r.success) {
    f.push_back({"rhs", js::esc(r.rhs.str())});
    hu << "rhs: " << r.rhs.str() << "\n";
    int N = r.check_order;
    Poly pos = positive_part(r.rhs, N, false);
    Poly oracle = truncate_t(oracle_expand(pr.dde, N)[r.kernel.unknown], N);
    int agree = 0;
    f.push_back({"oracle", oracle_table_json(pos, oracle, N, agree)});
    f.push_back({"positive_part", js::esc(pos.str())});
    hu << "positive part to t^" << N << ": " << pos.str() << "\n";
    hu << "oracle-match: " << agree << "/" << N << "\n";
  }
  return {js::obj(f), hu.str()};
}

}  // namespace osum
