#pragma once

#include <cmath>
#include <string>

#include "mae/backlund.hpp"
#include "mae/ma.hpp"
#include "support.hpp"

// Independent oracles shared by the unit tests and the acceptance binary.
namespace mae::test {

inline bool z(const Expr& e) { return is_zero(e); }

// Classification transcribed directly from the stated rules, kept apart from the library.
inline std::string oracle_type(const LiftingData& l) {
  const auto& V = l.V;
  const auto& W = l.W;
  Expr m4 = l.mu.pow(4);
  bool phi = z(-m4 * V[0] + l.epsilon * W[0]) && z(-m4 * V[1] + W[1]) && z(m4 * W[3] - V[3]) && z(m4 * W[1] - V[1]);
  if (!phi) return "inconsistent";
  if (l.mu != Expr(1)) return "not-special";
  bool rel = l.epsilon == -1 && z(W[0] + V[0]) && z(W[1] - V[1]) && z(W[3] - V[3]);
  if (l.s2t4) rel = rel && z(V[2] + W[2] + 2 * *l.s2t4);
  if (!rel) return "inconsistent";
  if (!z(V[1])) return "III";
  if (!z(V[0] * V[3])) return "I";
  if (z(V[0]) && z(V[3])) return "IIa";
  return "IIb";
}

inline Expr small(std::mt19937_64& g) { return rint(g, 0, 2) == 0 ? Expr(0) : Expr(rint(g, -4, 4)); }

inline LiftingData random_lifting(std::mt19937_64& g) {
  LiftingData l;
  for (auto& v : l.V) v = small(g);
  for (auto& w : l.W) w = small(g);
  int mode = int(rint(g, 0, 3));
  if (mode <= 1) {  // special and consistent by construction
    l.mu = Expr(1);
    l.epsilon = -1;
    l.W[0] = -l.V[0];
    l.W[1] = l.V[1];
    l.W[3] = l.V[3];
    if (rint(g, 0, 1)) l.s2t4 = mode == 0 ? -(l.V[2] + l.W[2]) / 2 : small(g);
  } else if (mode == 2) {  // mu > 1 with Phi forced to vanish
    l.mu = Expr(mpq_class(int(rint(g, 3, 6)), 2));
    l.epsilon = rint(g, 0, 1) ? 1 : -1;
    Expr m4 = l.mu.pow(4);
    l.V[1] = l.W[1] = Expr(0);
    l.W[0] = m4 * l.V[0] * Expr(l.epsilon);
    l.V[3] = m4 * l.W[3];
  } else {  // unconstrained
    l.mu = rint(g, 0, 1) ? Expr(1) : Expr(2);
    l.epsilon = l.mu == Expr(1) ? -1 : (rint(g, 0, 1) ? 1 : -1);
  }
  return l;
}

inline Mat2 S(const std::array<Expr, 8>& V, int off) { return {{{V[off], V[off + 1]}, {V[off + 2], V[off + 3]}}}; }

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

inline Mat2 inv(const Mat2& a) {
  Expr det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

inline Expr entry(std::mt19937_64& g, const std::vector<Expr>& vars) {
  if (rint(g, 0, 2) == 0) return Expr(rint(g, 1, 3)) + rand_poly(g, vars, 1, 1) * Expr(rint(g, 0, 1));
  return Expr(rint(g, -3, 3));
}

inline GaugeElement random_gauge(std::mt19937_64& g, const std::vector<Expr>& vars) {
  GaugeElement e;
  for (;;) {
    for (auto& row : e.A)
      for (auto& x : row) x = entry(g, vars);
    e.a = e.A[0][0] * e.A[1][1] - e.A[0][1] * e.A[1][0];
    if (!is_zero(e.a)) break;
  }
  Expr b11(rint(g, 1, 3)), b12 = entry(g, vars), b21 = entry(g, vars);
  e.B = {{{b11, b12}, {b21, (e.a + b12 * b21) / b11}}};
  return e;
}

// S_1 and S_2 after a gauge change, as predicted by a A^-1 S B.
inline bool equivariant(const std::array<Expr, 8>& V, const std::array<Expr, 8>& W, const GaugeElement& e) {
  for (int k : {0, 4}) {
    Mat2 pred = mul(mul(inv(e.A), S(V, k)), e.B);
    Mat2 got = S(W, k);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!is_zero(got[i][j] - e.a * pred[i][j])) return false;
  }
  return true;
}

// S_1, S_2 under the swap J.
inline bool swap_rule(const std::array<Expr, 8>& V, const std::array<Expr, 8>& X) {
  return is_zero(X[0] + V[3]) && is_zero(X[1] - V[1]) && is_zero(X[2] - V[2]) && is_zero(X[3] + V[0]) &&
         is_zero(X[4] - V[7]) && is_zero(X[5] + V[5]) && is_zero(X[6] + V[6]) && is_zero(X[7] - V[4]);
}

// The 1-soliton formula without the factor 2.
inline double closed_printed(double lambda, double v0, double x, double y) {
  return std::atan(std::tan(v0 / 2) * std::exp(-lambda * x - y / lambda));
}

}  // namespace mae::test
