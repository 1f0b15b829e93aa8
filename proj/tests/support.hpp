#pragma once

#include <random>
#include <string>
#include <vector>

#include "mae/doc.hpp"
#include "mae/form.hpp"
#include "mae/parse.hpp"

#ifndef MAE_DATA_DIR
#define MAE_DATA_DIR "data"
#endif

namespace mae::test {

inline std::string data(const std::string& name) { return std::string(MAE_DATA_DIR) + "/" + name; }

inline Expr P(const ContextPtr& ctx, const std::string& s) { return parse_expr(s, ctx); }

inline long rint(std::mt19937_64& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

// Sum of a few monomials in the given atoms with small integer coefficients.
inline Expr rand_poly(std::mt19937_64& g, const std::vector<Expr>& atoms, int terms = 3, int maxdeg = 2) {
  Expr s(0);
  for (int t = 0; t < terms; ++t) {
    Expr m(rint(g, -5, 5));
    for (auto& a : atoms) m *= a.pow(int(rint(g, 0, maxdeg)));
    s += m;
  }
  return s;
}

// Quotient whose denominator has a nonzero constant term.
inline Expr rand_rat(std::mt19937_64& g, const std::vector<Expr>& atoms) {
  Expr den = rand_poly(g, atoms, 2, 2) + Expr(rint(g, 1, 4)) * Expr(7);
  if (den.zero()) den = Expr(1);
  return rand_poly(g, atoms) / den;
}

inline std::vector<uint32_t> masks_of_degree(int n, int deg) {
  std::vector<uint32_t> out;
  for (uint32_t m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == deg) out.push_back(m);
  return out;
}

inline Form rand_form(std::mt19937_64& g, const BasisPtr& b, int deg, const std::vector<Expr>& atoms) {
  Form f(b, deg);
  auto ms = masks_of_degree(b->n(), deg);
  int k = int(rint(g, 1, 3));
  for (int t = 0; t < k; ++t) f.add_term(ms[rint(g, 0, long(ms.size()) - 1)], rand_poly(g, atoms, 2, 2));
  return f;
}

}  // namespace mae::test
