#pragma once

// shared fixture builders for the walk models used across the test suite

#include "osum/dde.hpp"

namespace osum::testutil {

inline Poly mono(const Rat& c, int i, int j, int n = 0) {
  return Poly::monomial(c, {i, j, n});
}

// F = 1 + t(x+y)F + t Dx F + t Dy F  (diagonal small-step model)
inline DDE ex1_dde() {
  DDE d;
  d.unknowns = {"F"};
  DdeEquation eq;
  eq.free = Poly(1);
  eq.terms.push_back({Poly::var(0), 0, 0, 0});
  eq.terms.push_back({Poly::var(1), 0, 0, 0});
  eq.terms.push_back({Poly(1), 1, 0, 0});
  eq.terms.push_back({Poly(1), 0, 1, 0});
  d.eqs.push_back(eq);
  return d;
}

// F0 = 1 + t F1 + t Dx Dy F1 ;  F1 = t(1+x+y)F0 + t y Dx F0
inline DDE ex3_dde() {
  DDE d;
  d.unknowns = {"F0", "F1"};
  DdeEquation e0;
  e0.free = Poly(1);
  e0.terms.push_back({Poly(1), 0, 0, 1});
  e0.terms.push_back({Poly(1), 1, 1, 1});
  d.eqs.push_back(e0);
  DdeEquation e1;
  e1.free = Poly();
  e1.terms.push_back({Poly(1) + Poly::var(0) + Poly::var(1), 0, 0, 0});
  e1.terms.push_back({Poly::var(1), 1, 0, 0});
  d.eqs.push_back(e1);
  return d;
}

// the large-step kernel equation obtained by eliminating F1:
// (1 - t^2 S0 S1) F0 = 1 - t xbar ybar (F1(x,0) + F1(0,y) - F1(0,0))
//                        - t^2 (xbar ybar + 1) xbar y F0(0,y)
inline KernelEquation ex3_kernel() {
  Poly S0 = mono(Rat(1), -1, 1) + Poly::var(1) + Poly::var(0) + Poly(1);
  Poly S1 = mono(Rat(1), -1, -1) + Poly(1);
  KernelEquation k;
  k.S = S0 * S1;
  k.r = 2;
  k.unknown = 0;
  k.rhs = Poly(1);
  Poly txy = mono(Rat(1), -1, -1, 1);  // t xbar ybar
  k.sections.push_back({-txy, SectionSpec{1, SectionKind::XSection, 0, 0}});
  k.sections.push_back({-txy, SectionSpec{1, SectionKind::YSection, 0, 0}});
  k.sections.push_back({txy, SectionSpec{1, SectionKind::Point, 0, 0}});
  Poly c = -(mono(Rat(1), -1, -1) + Poly(1)) * mono(Rat(1), -1, 1, 2);
  k.sections.push_back({c, SectionSpec{0, SectionKind::YSection, 0, 0}});
  return k;
}

}  // namespace osum::testutil
