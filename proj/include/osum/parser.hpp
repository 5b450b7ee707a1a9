#pragma once

// Problem file format: a small text grammar for discrete differential
// equations and optional kernel-form blocks.
//
//   name: diagonal-steps          (optional)
//   unknowns: F0 F1
//   eq: F0 = 1 + t*F1 + t*Dx(Dy(F1))
//   eq: F1 = t*(1 + x + y)*F0 + t*y*Dx(F0)
//   kernel:                       (optional block)
//   S = (x^-1*y + y + x + 1)*(x^-1*y^-1 + 1)
//   r = 2
//   unknown = F0
//   rhs = 1
//   section: (-t*x^-1*y^-1)*xsec(F1, 0)
//
// Expressions are built from integers (and rationals n/d), x, y, t, +, -, *,
// parentheses, ^ with integer exponents, Dx(.), Dy(.) and unknown names.
// Negative exponents (Laurent terms) are allowed only inside the kernel
// block.  Section atoms xsec(U, j), ysec(U, i) and at(U, i, j) are allowed
// only on `section:` lines.  Lines starting with '#' are comments.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "osum/dde.hpp"

namespace osum {

struct Problem {
  std::string name = "problem";
  DDE dde;
  std::optional<KernelEquation> kernel;
};

namespace parsing {

struct Pos {
  int line = 1, col = 1;
};

[[noreturn]] inline void fail(const Pos& p, const std::string& msg) {
  std::ostringstream os;
  os << "line " << p.line << ", column " << p.col << ": " << msg;
  throw EngineError(ErrKind::ParseError, os.str());
}

enum class TokKind { Int, Ident, Sym, End };

struct Tok {
  TokKind kind = TokKind::End;
  std::string text;
  Pos pos;
};

// tokenizer for a single logical line
class Lexer {
 public:
  Lexer(std::string s, int line) : s_(std::move(s)) { pos_.line = line; }

  Tok next() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) advance();
    Tok t;
    t.pos = pos_;
    if (i_ >= s_.size()) return t;
    char c = s_[i_];
    if (std::isdigit((unsigned char)c)) {
      t.kind = TokKind::Int;
      while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) {
        t.text += s_[i_];
        advance();
      }
      return t;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      t.kind = TokKind::Ident;
      while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_')) {
        t.text += s_[i_];
        advance();
      }
      return t;
    }
    static const std::string syms = "+-*^()/,=";
    if (syms.find(c) != std::string::npos) {
      t.kind = TokKind::Sym;
      t.text = c;
      advance();
      return t;
    }
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    ++i_;
    ++pos_.col;
  }
  std::string s_;
  size_t i_ = 0;
  Pos pos_;
};

// a term key: either a delta term Dx^k Dy^l U or a section marker
struct Key {
  bool section = false;
  int k = 0, l = 0, unknown = 0;
  SectionSpec spec{};
  friend bool operator<(const Key& a, const Key& b) {
    auto tup = [](const Key& x) {
      return std::tuple(x.section, x.k, x.l, x.unknown, x.spec.unknown, (int)x.spec.kind,
                        x.spec.i, x.spec.j);
    };
    return tup(a) < tup(b);
  }
};

// a value linear in the unknown/section markers, with Poly coefficients
struct Lin {
  Poly free;
  std::map<Key, Poly> terms;

  bool pure() const { return terms.empty(); }
};

enum class Mode { Eq, Kernel, Section };

class ExprParser {
 public:
  ExprParser(const std::string& text, int line, Mode mode,
             const std::vector<std::string>& unknowns)
      : lex_(text, line), mode_(mode), unknowns_(unknowns) {
    cur_ = lex_.next();
  }

  Lin parse_all() {
    Lin v = expr();
    if (cur_.kind != TokKind::End) fail(cur_.pos, "trailing input after expression");
    return v;
  }

 private:
  bool is_sym(const char* s) const { return cur_.kind == TokKind::Sym && cur_.text == s; }
  void eat() { cur_ = lex_.next(); }
  void expect_sym(const char* s, const char* what) {
    if (!is_sym(s)) fail(cur_.pos, std::string("expected '") + s + "' " + what);
    eat();
  }

  int unknown_index(const Tok& t) {
    for (size_t i = 0; i < unknowns_.size(); ++i)
      if (unknowns_[i] == t.text) return (int)i;
    fail(t.pos, "unknown symbol '" + t.text + "'");
  }

  long int_lit() {
    if (cur_.kind != TokKind::Int) fail(cur_.pos, "expected an integer");
    long v = std::stol(cur_.text);
    eat();
    return v;
  }

  long signed_int_lit() {
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      eat();
    }
    long v = int_lit();
    return neg ? -v : v;
  }

  Lin signed_term(bool neg) {
    while (is_sym("+") || is_sym("-")) {
      if (cur_.text == "-") neg = !neg;
      eat();
    }
    Lin v = term();
    return neg ? scale(v, Poly(-1)) : v;
  }

  Lin expr() {
    Lin acc = signed_term(false);
    while (is_sym("+") || is_sym("-")) {
      bool minus = cur_.text == "-";
      eat();
      add_into(acc, signed_term(minus));
    }
    return acc;
  }

  Lin term() {
    Pos p0 = cur_.pos;
    Lin acc = power();
    while (is_sym("*")) {
      eat();
      Pos p = cur_.pos;
      Lin f = power();
      acc = mul(acc, f, acc.pure() ? p : p0);
    }
    return acc;
  }

  Lin power() {
    Pos p = cur_.pos;
    Lin base = atom();
    if (!is_sym("^")) return base;
    eat();
    long e = signed_int_lit();
    if (!base.pure()) fail(p, "cannot raise an unknown to a power");
    if (e >= 0) {
      Poly r(1);
      for (long i = 0; i < e; ++i) r = r * base.free;
      return Lin{r, {}};
    }
    if (mode_ == Mode::Eq) fail(p, "negative exponents are only allowed in the kernel block");
    const auto& ts = base.free.terms();
    if (ts.size() != 1 || ts.begin()->second != 1)
      fail(p, "negative exponent requires a single variable");
    auto ex = ts.begin()->first;
    return Lin{Poly::monomial(Rat(1), {(int)(ex[0] * e), (int)(ex[1] * e), (int)(ex[2] * e)}),
               {}};
  }

  Lin atom() {
    Pos p = cur_.pos;
    if (cur_.kind == TokKind::Int) {
      Rat num(int_lit());
      if (is_sym("/")) {
        eat();
        long d = int_lit();
        if (d == 0) fail(p, "zero denominator in rational literal");
        num /= d;
      }
      return Lin{Poly(num), {}};
    }
    if (is_sym("(")) {
      eat();
      Lin v = expr();
      expect_sym(")", "to close '('");
      return v;
    }
    if (cur_.kind != TokKind::Ident) fail(p, "expected a number, variable or name");
    std::string id = cur_.text;
    eat();
    if (id == "x") return Lin{Poly::var(0), {}};
    if (id == "y") return Lin{Poly::var(1), {}};
    if (id == "t") return Lin{Poly::var(2), {}};
    if (id == "Dx" || id == "Dy") {
      if (mode_ != Mode::Eq) fail(p, "'" + id + "' is only allowed in eq: lines");
      expect_sym("(", ("after " + id).c_str());
      Lin inner = expr();
      expect_sym(")", ("to close " + id).c_str());
      return delta(inner, id == "Dx" ? 0 : 1, p);
    }
    if (id == "xsec" || id == "ysec" || id == "at") {
      if (mode_ != Mode::Section) fail(p, "'" + id + "' is only allowed on section: lines");
      expect_sym("(", ("after " + id).c_str());
      if (cur_.kind != TokKind::Ident) fail(cur_.pos, "expected an unknown name");
      int u = unknown_index(cur_);
      eat();
      expect_sym(",", "between section arguments");
      long a = signed_int_lit();
      SectionSpec s;
      s.unknown = u;
      if (id == "xsec") {
        s.kind = SectionKind::XSection;
        s.j = (int)a;
      } else if (id == "ysec") {
        s.kind = SectionKind::YSection;
        s.i = (int)a;
      } else {
        s.kind = SectionKind::Point;
        s.i = (int)a;
        expect_sym(",", "between section arguments");
        s.j = (int)signed_int_lit();
      }
      expect_sym(")", "to close the section atom");
      Lin v;
      Key k;
      k.section = true;
      k.spec = s;
      v.terms[k] = Poly(1);
      return v;
    }
    if (mode_ == Mode::Section) fail(p, "unknowns may not appear directly on section: lines");
    if (mode_ == Mode::Kernel) fail(p, "unknowns may not appear in kernel expressions");
    Lin v;
    Key k;
    k.unknown = unknown_index(Tok{TokKind::Ident, id, p});
    v.terms[k] = Poly(1);
    return v;
  }

  static Lin scale(Lin v, const Poly& c) {
    v.free = v.free * c;
    for (auto& [k, p] : v.terms) p = p * c;
    return v;
  }

  static void add_into(Lin& a, const Lin& b) {
    a.free += b.free;
    for (auto& [k, p] : b.terms) {
      auto it = a.terms.find(k);
      if (it == a.terms.end())
        a.terms[k] = p;
      else {
        it->second += p;
        if (it->second.is_zero()) a.terms.erase(it);
      }
    }
  }

  Lin mul(const Lin& a, const Lin& b, const Pos& p) {
    if (!a.pure() && !b.pure())
      fail(p, "product of two unknown-bearing expressions is not linear");
    if (a.pure()) return scale(b, a.free);
    return scale(a, b.free);
  }

  Lin delta(const Lin& v, int axis, const Pos& p) {
    Lin r;
    r.free = delta_xy(v.free, axis == 0 ? 1 : 0, axis == 1 ? 1 : 0);
    for (auto& [k, c] : v.terms) {
      if (c.depends_on(axis))
        fail(p, std::string("D") + (axis == 0 ? "x" : "y") +
                    " cannot be applied across a coefficient depending on " +
                    (axis == 0 ? "x" : "y"));
      Key nk = k;
      (axis == 0 ? nk.k : nk.l) += 1;
      r.terms[nk] = c;
    }
    return r;
  }

  Lexer lex_;
  Tok cur_;
  Mode mode_;
  const std::vector<std::string>& unknowns_;
};

inline bool t_linear_strip(const Poly& p, Poly& out) {
  // require p = t * q with q free of t; return q
  Poly q;
  for (auto& [e, c] : p.terms()) {
    if (e[2] != 1) return false;
    q.add_term({e[0], e[1], 0}, c);
  }
  out = q;
  return true;
}

}  // namespace parsing

inline Problem parse_problem(const std::string& text) {
  using namespace parsing;
  Problem pr;
  std::vector<std::pair<int, std::string>> lines;  // (line number, content)
  {
    std::istringstream in(text);
    std::string l;
    int n = 0;
    while (std::getline(in, l)) {
      ++n;
      size_t h = l.find('#');
      if (h != std::string::npos) l = l.substr(0, h);
      size_t a = l.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      size_t b = l.find_last_not_of(" \t\r");
      lines.push_back({n, l.substr(a, b - a + 1)});
    }
  }
  auto head = [](const std::string& l, const char* kw) -> std::optional<std::string> {
    std::string k = std::string(kw);
    if (l.rfind(k, 0) != 0) return std::nullopt;
    return l.substr(k.size());
  };

  bool in_kernel = false;
  std::vector<std::pair<int, std::string>> eq_lines;
  std::vector<std::pair<int, std::string>> kernel_lines;
  for (auto& [ln, l] : lines) {
    Pos at{ln, 1};
    if (auto v = head(l, "name:")) {
      std::istringstream is(*v);
      if (!(is >> pr.name)) fail(at, "empty name");
      continue;
    }
    if (auto v = head(l, "unknowns:")) {
      std::istringstream is(*v);
      std::string u;
      while (is >> u) pr.dde.unknowns.push_back(u);
      if (pr.dde.unknowns.empty()) fail(at, "no unknowns declared");
      continue;
    }
    if (l == "kernel:") {
      if (in_kernel) fail(at, "duplicate kernel block");
      in_kernel = true;
      continue;
    }
    if (auto v = head(l, "eq:")) {
      if (in_kernel) fail(at, "eq: line inside the kernel block");
      eq_lines.push_back({ln, *v});
      continue;
    }
    if (in_kernel) {
      kernel_lines.push_back({ln, l});
      continue;
    }
    fail(at, "unrecognized line");
  }
  if (pr.dde.unknowns.empty()) fail(Pos{1, 1}, "missing unknowns: line");
  if (eq_lines.size() != pr.dde.unknowns.size())
    fail(Pos{1, 1}, "need exactly one eq: line per unknown");

  pr.dde.eqs.resize(pr.dde.unknowns.size());
  std::vector<bool> seen(pr.dde.unknowns.size(), false);
  for (auto& [ln, body] : eq_lines) {
    size_t eq = body.find('=');
    if (eq == std::string::npos) fail(Pos{ln, 1}, "eq: line without '='");
    std::string lhs = body.substr(0, eq);
    {
      size_t a = lhs.find_first_not_of(" \t");
      size_t b = lhs.find_last_not_of(" \t");
      lhs = a == std::string::npos ? "" : lhs.substr(a, b - a + 1);
    }
    int u = -1;
    for (size_t i = 0; i < pr.dde.unknowns.size(); ++i)
      if (pr.dde.unknowns[i] == lhs) u = (int)i;
    if (u < 0) fail(Pos{ln, 1}, "left-hand side is not a declared unknown");
    if (seen[u]) fail(Pos{ln, 1}, "duplicate equation for '" + lhs + "'");
    seen[u] = true;
    ExprParser ep(body.substr(eq + 1), ln, Mode::Eq, pr.dde.unknowns);
    Lin v = ep.parse_all();
    DdeEquation& e = pr.dde.eqs[u];
    if (v.free.depends_on(2))
      fail(Pos{ln, 1}, "free term must not involve t");
    e.free = v.free;
    for (auto& [k, c] : v.terms) {
      Poly stripped;
      if (!t_linear_strip(c, stripped))
        fail(Pos{ln, 1}, "every unknown term must carry exactly one factor of t");
      if (stripped.is_laurent_negative())
        fail(Pos{ln, 1}, "negative exponents are only allowed in the kernel block");
      e.terms.push_back({stripped, k.k, k.l, k.unknown});
    }
  }

  if (in_kernel) {
    KernelEquation k;
    bool sawS = false, sawU = false;
    for (auto& [ln, l] : kernel_lines) {
      Pos at{ln, 1};
      auto rhs_of = [&](const std::string& body) {
        size_t eq = body.find('=');
        if (eq == std::string::npos) fail(Pos{ln, 1}, "kernel line without '='");
        return body.substr(eq + 1);
      };
      if (l.rfind("S", 0) == 0 && l.find('=') != std::string::npos &&
          l.substr(0, l.find('=')).find_first_not_of("S \t") == std::string::npos) {
        ExprParser ep(rhs_of(l), ln, Mode::Kernel, pr.dde.unknowns);
        k.S = ep.parse_all().free;
        if (k.S.depends_on(2)) fail(at, "S must not involve t");
        sawS = true;
        continue;
      }
      if (auto v = parsing::Lexer(l, ln).next();
          v.kind == TokKind::Ident && (v.text == "r" || v.text == "unknown" || v.text == "rhs")) {
        std::string body = rhs_of(l);
        if (v.text == "r") {
          ExprParser ep(body, ln, Mode::Kernel, pr.dde.unknowns);
          Lin rv = ep.parse_all();
          const auto& ts = rv.free.terms();
          auto is_const = [&] {
            auto& e = ts.begin()->first;
            return e[0] == 0 && e[1] == 0 && e[2] == 0;
          };
          if (!rv.pure() || ts.size() != 1 || !is_const() ||
              ts.begin()->second.get_den() != 1)
            fail(at, "r must be a positive integer");
          k.r = (int)ts.begin()->second.get_num().get_si();
          if (k.r < 1) fail(at, "r must be a positive integer");
        } else if (v.text == "unknown") {
          std::istringstream is(body);
          std::string name;
          if (!(is >> name)) fail(at, "missing unknown name");
          int u = -1;
          for (size_t i = 0; i < pr.dde.unknowns.size(); ++i)
            if (pr.dde.unknowns[i] == name) u = (int)i;
          if (u < 0) fail(at, "'" + name + "' is not a declared unknown");
          k.unknown = u;
          sawU = true;
        } else {
          ExprParser ep(body, ln, Mode::Kernel, pr.dde.unknowns);
          k.rhs = ep.parse_all().free;
        }
        continue;
      }
      if (auto v = head(l, "section:")) {
        ExprParser ep(*v, ln, Mode::Section, pr.dde.unknowns);
        Lin sv = ep.parse_all();
        if (!sv.free.is_zero() || sv.terms.size() != 1)
          fail(at, "a section: line must be (coefficient) * one section atom");
        auto& [key, coeff] = *sv.terms.begin();
        k.sections.push_back({coeff, key.spec});
        continue;
      }
      fail(at, "unrecognized kernel line");
    }
    if (!sawS) fail(Pos{1, 1}, "kernel block without S");
    if (pr.dde.unknowns.size() > 1 && !sawU)
      fail(Pos{1, 1}, "kernel block for a system must name the unknown");
    pr.kernel = std::move(k);
  }

  pr.dde.validate();
  return pr;
}

inline Problem parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError(ErrKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem(os.str());
}

// canonical rendering; parse(print_problem(p)) reproduces p exactly
inline std::string print_problem(const Problem& pr) {
  std::ostringstream os;
  os << "name: " << pr.name << "\n";
  os << "unknowns:";
  for (auto& u : pr.dde.unknowns) os << " " << u;
  os << "\n";
  for (size_t i = 0; i < pr.dde.eqs.size(); ++i) {
    const DdeEquation& e = pr.dde.eqs[i];
    os << "eq: " << pr.dde.unknowns[i] << " = " << e.free.str();
    for (auto& tm : e.terms) {
      os << " + (" << tm.coeff.str() << ")*t*";
      for (int a = 0; a < tm.k; ++a) os << "Dx(";
      for (int a = 0; a < tm.l; ++a) os << "Dy(";
      os << pr.dde.unknowns[tm.unknown];
      for (int a = 0; a < tm.k + tm.l; ++a) os << ")";
    }
    os << "\n";
  }
  if (pr.kernel) {
    const KernelEquation& k = *pr.kernel;
    os << "kernel:\n";
    os << "S = " << k.S.str() << "\n";
    os << "r = " << k.r << "\n";
    os << "unknown = " << pr.dde.unknowns[k.unknown] << "\n";
    os << "rhs = " << k.rhs.str() << "\n";
    for (auto& [c, s] : k.sections) {
      os << "section: (" << c.str() << ")*";
      switch (s.kind) {
        case SectionKind::XSection:
          os << "xsec(" << pr.dde.unknowns[s.unknown] << ", " << s.j << ")";
          break;
        case SectionKind::YSection:
          os << "ysec(" << pr.dde.unknowns[s.unknown] << ", " << s.i << ")";
          break;
        case SectionKind::Point:
          os << "at(" << pr.dde.unknowns[s.unknown] << ", " << s.i << ", " << s.j << ")";
          break;
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace osum
