#pragma once

// Polynomials in auxiliary variables X_0..X_{n-1} with coefficients in
// Q(x,y) (RatFun), under pure lex order with X_0 largest, and a Buchberger
// Groebner-basis engine with a step budget.

#include <map>
#include <vector>

#include "osum/errors.hpp"
#include "osum/poly.hpp"

namespace osum {

using Expv = std::vector<int>;

struct LexLess {
  bool operator()(const Expv& a, const Expv& b) const {
    // earlier index = more significant variable
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

class MVPoly {
 public:
  using Map = std::map<Expv, RatFun, LexLess>;

  explicit MVPoly(int nvars = 0) : n_(nvars) {}
  MVPoly(int nvars, const RatFun& c) : n_(nvars) {
    if (!c.is_zero()) terms_[Expv(nvars, 0)] = c;
  }
  static MVPoly var(int nvars, int i, int e = 1) {
    MVPoly p(nvars);
    Expv m(nvars, 0);
    m[i] = e;
    p.terms_[m] = RatFun(1);
    return p;
  }

  int nvars() const { return n_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Expv(n_, 0));
  }
  RatFun constant_value() const {
    auto it = terms_.find(Expv(n_, 0));
    return it == terms_.end() ? RatFun(0) : it->second;
  }

  std::pair<Expv, RatFun> lt() const {
    auto it = std::prev(terms_.end());
    return {it->first, it->second};
  }

  int deg(int v) const {
    int d = 0;
    for (auto& [e, c] : terms_) d = std::max(d, e[v]);
    return terms_.empty() ? -1 : d;
  }
  bool depends_on(int v) const {
    for (auto& [e, c] : terms_)
      if (e[v] != 0) return true;
    return false;
  }

  void add_term(const Expv& e, const RatFun& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend MVPoly operator+(const MVPoly& a, const MVPoly& b) {
    MVPoly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MVPoly operator-(const MVPoly& a, const MVPoly& b) {
    MVPoly r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  friend MVPoly operator-(const MVPoly& a) {
    MVPoly r(a.n_);
    for (auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }
  friend MVPoly operator*(const MVPoly& a, const MVPoly& b) {
    MVPoly r(a.n_);
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) {
        Expv e = ea;
        for (int i = 0; i < r.n_; ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend MVPoly operator*(const MVPoly& a, const RatFun& s) {
    MVPoly r(a.n_);
    if (s.is_zero()) return r;
    for (auto& [e, c] : a.terms_) r.terms_[e] = c * s;
    return r;
  }
  MVPoly& operator+=(const MVPoly& b) { return *this = *this + b; }
  MVPoly& operator-=(const MVPoly& b) { return *this = *this - b; }
  MVPoly& operator*=(const MVPoly& b) { return *this = *this * b; }
  friend bool operator==(const MVPoly& a, const MVPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const MVPoly& a, const MVPoly& b) { return !(a == b); }

  MVPoly monic() const {
    if (terms_.empty()) return *this;
    return *this * lt().second.inv();
  }

  MVPoly mul_term(const Expv& e, const RatFun& c) const {
    MVPoly r(n_);
    for (auto& [ea, ca] : terms_) {
      Expv e2 = ea;
      for (int i = 0; i < n_; ++i) e2[i] += e[i];
      r.terms_[e2] = ca * c;
    }
    return r;
  }

  // substitute X_i -> args[i]
  MVPoly subst(const std::vector<MVPoly>& args) const {
    int m = args.empty() ? 0 : args[0].nvars();
    MVPoly r(m);
    for (auto& [e, c] : terms_) {
      MVPoly term(m, c);
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < e[i]; ++k) term *= args[i];
      r += term;
    }
    return r;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) s += " + ";
      first = false;
      s += "(" + it->second.str() + ")";
      for (int i = 0; i < n_; ++i) {
        if (it->first[i] == 0) continue;
        s += "*" + names[i];
        if (it->first[i] != 1) s += "^" + std::to_string(it->first[i]);
      }
    }
    return s;
  }

 private:
  int n_;
  Map terms_;
};

namespace detail {

inline bool divides(const Expv& a, const Expv& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Expv exp_sub(const Expv& a, const Expv& b) {
  Expv r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
inline Expv exp_lcm(const Expv& a, const Expv& b) {
  Expv r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}
inline bool exp_coprime(const Expv& a, const Expv& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

}  // namespace detail

// normal form of p modulo basis (full multivariate division)
inline MVPoly mv_reduce(MVPoly p, const std::vector<MVPoly>& basis, long* budget = nullptr) {
  MVPoly r(p.nvars());
  while (!p.is_zero()) {
    if (budget && --*budget < 0)
      throw EngineError(ErrKind::ResourceExhausted, "Groebner step budget exhausted");
    auto [e, c] = p.lt();
    bool hit = false;
    for (auto& b : basis) {
      if (b.is_zero()) continue;
      auto [eb, cb] = b.lt();
      if (detail::divides(eb, e)) {
        p -= b.mul_term(detail::exp_sub(e, eb), c / cb);
        hit = true;
        break;
      }
    }
    if (!hit) {
      r.add_term(e, c);
      MVPoly t(p.nvars());
      t.add_term(e, c);
      p -= t;
    }
  }
  return r;
}

inline MVPoly spoly(const MVPoly& f, const MVPoly& g) {
  auto [ef, cf] = f.lt();
  auto [eg, cg] = g.lt();
  Expv l = detail::exp_lcm(ef, eg);
  return f.mul_term(detail::exp_sub(l, ef), cf.inv()) -
         g.mul_term(detail::exp_sub(l, eg), cg.inv());
}

// reduced lex Groebner basis; deterministic; throws ResourceExhausted if the
// reduction budget is exceeded
inline std::vector<MVPoly> gb_lex(std::vector<MVPoly> gens, long budget = 2000000) {
  std::vector<MVPoly> g;
  for (auto& p : gens)
    if (!p.is_zero()) g.push_back(p.monic());
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j) pairs.push_back({i, j});
  while (!pairs.empty()) {
    // normal selection: smallest lcm in lex
    size_t best = 0;
    Expv bl = detail::exp_lcm(g[pairs[0].first].lt().first, g[pairs[0].second].lt().first);
    for (size_t k = 1; k < pairs.size(); ++k) {
      Expv l = detail::exp_lcm(g[pairs[k].first].lt().first, g[pairs[k].second].lt().first);
      if (LexLess()(l, bl)) {
        bl = l;
        best = k;
      }
    }
    auto [i, j] = pairs[best];
    pairs.erase(pairs.begin() + best);
    if (detail::exp_coprime(g[i].lt().first, g[j].lt().first)) continue;
    MVPoly s = mv_reduce(spoly(g[i], g[j]), g, &budget);
    if (s.is_zero()) continue;
    s = s.monic();
    for (size_t k = 0; k < g.size(); ++k) pairs.push_back({k, g.size()});
    g.push_back(s);
  }
  // minimalize: drop elements whose lt is divisible by another lt
  std::vector<MVPoly> min;
  for (size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      if (detail::divides(g[j].lt().first, g[i].lt().first)) {
        if (g[j].lt().first == g[i].lt().first && j > i) continue;
        redundant = true;
        break;
      }
    }
    if (!redundant) min.push_back(g[i]);
  }
  // inter-reduce tails
  std::vector<MVPoly> red;
  for (size_t i = 0; i < min.size(); ++i) {
    std::vector<MVPoly> others;
    for (size_t j = 0; j < min.size(); ++j)
      if (j != i) others.push_back(min[j]);
    red.push_back(mv_reduce(min[i], others, &budget).monic());
  }
  std::sort(red.begin(), red.end(), [](const MVPoly& a, const MVPoly& b) {
    return LexLess()(a.lt().first, b.lt().first);
  });
  return red;
}

}  // namespace osum
