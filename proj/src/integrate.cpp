// Antiderivatives of rational functions in one coordinate, other atoms as
// coefficients: polynomial part, Hermite reduction, Rothstein-Trager logs,
// arctan for irreducible quadratics with a rational discriminant root.
#include <cmath>
#include <complex>

#include "mae/expr.hpp"

namespace mae {

namespace {

using UP = std::vector<Expr>;  // coefficient of v^k at index k

void trim(UP& a) {
  while (!a.empty() && a.back().zero()) a.pop_back();
}
int deg(const UP& a) { return int(a.size()) - 1; }

UP from_poly(const ContextPtr& ctx, const Poly& p, int v) {
  UP r;
  for (auto& c : p.coeffs(v)) r.push_back(Expr(ctx, c));
  trim(r);
  return r;
}

Expr to_expr(const ContextPtr& ctx, const UP& a, int v) {
  Expr x = Expr::atom(ctx, v), r(0);
  for (int k = deg(a); k >= 0; --k) r = r * x + a[k];
  return r;
}

UP add(const UP& a, const UP& b) {
  UP r(std::max(a.size(), b.size()), Expr(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}
UP scale(const UP& a, const Expr& c) {
  if (c.zero()) return {};
  UP r;
  for (auto& x : a) r.push_back(x * c);
  trim(r);
  return r;
}
UP sub(const UP& a, const UP& b) { return add(a, scale(b, Expr(-1))); }
UP mul(const UP& a, const UP& b) {
  if (a.empty() || b.empty()) return {};
  UP r(a.size() + b.size() - 1, Expr(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].zero()) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}
UP deriv(const UP& a) {
  UP r;
  for (size_t k = 1; k < a.size(); ++k) r.push_back(a[k] * Expr(long(k)));
  trim(r);
  return r;
}
void divmod(const UP& a, const UP& b, UP* q, UP* r) {
  UP rem = a;
  UP quo(std::max(0, deg(a) - deg(b) + 1), Expr(0));
  Expr il = b.back().inv();
  while (deg(rem) >= deg(b)) {
    int s = deg(rem) - deg(b);
    Expr f = rem.back() * il;
    quo[s] = f;
    for (int k = 0; k <= deg(b); ++k) rem[s + k] -= f * b[k];
    rem.pop_back();
    trim(rem);
  }
  trim(quo);
  if (q) *q = quo;
  if (r) *r = rem;
}
UP quo(const UP& a, const UP& b) {
  UP q;
  divmod(a, b, &q, nullptr);
  return q;
}
UP rem(const UP& a, const UP& b) {
  UP r;
  divmod(a, b, nullptr, &r);
  return r;
}
UP monic(const UP& a) { return a.empty() ? a : scale(a, a.back().inv()); }
UP gcd(UP a, UP b) {
  while (!b.empty()) {
    UP r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}
// s*a + t*b = g (monic gcd)
UP ext_gcd(UP a, UP b, UP* s_out) {
  UP s0{Expr(1)}, s1;
  while (!b.empty()) {
    UP q, r;
    divmod(a, b, &q, &r);
    UP s2 = sub(s0, mul(q, s1));
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  Expr il = a.back().inv();
  *s_out = scale(s0, il);
  return scale(a, il);
}
// s*a + t*b = c with deg s < deg b
void diophantine(const UP& a, const UP& b, const UP& c, UP* s, UP* t) {
  UP s0;
  UP g = ext_gcd(a, b, &s0);
  UP q, r;
  divmod(c, g, &q, &r);
  if (!r.empty()) throw std::logic_error("diophantine: gcd does not divide");
  UP sq = mul(s0, q);
  UP ss = rem(sq, b);
  *s = ss;
  *t = quo(sub(c, mul(ss, a)), b);
}

Expr resultant(UP a, UP b) {
  Expr res(1);
  for (;;) {
    if (a.empty() || b.empty()) return Expr(0);
    int da = deg(a), db = deg(b);
    if (db == 0) return res * b[0].pow(da);
    UP r = rem(a, b);
    if (r.empty()) return Expr(0);
    if ((da & 1) && (db & 1)) res = -res;
    res *= b.back().pow(da - deg(r));
    a = std::move(b);
    b = std::move(r);
  }
}

// Polynomial in c through values at c = 0..n (Newton form expanded).
UP interpolate(const std::vector<Expr>& y) {
  int n = int(y.size());
  std::vector<Expr> dd = y;
  for (int j = 1; j < n; ++j)
    for (int i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / Expr(long(j));
  UP r{dd[n - 1]};
  for (int i = n - 2; i >= 0; --i) {
    r = mul(r, UP{Expr(-long(i)), Expr(1)});
    r = add(r, UP{dd[i]});
  }
  trim(r);
  return r;
}

bool all_const(const UP& a) {
  for (auto& x : a)
    if (!x.is_const()) return false;
  return true;
}

mpq_class rationalize(double x) {
  // continued fraction with bounded denominator
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double f = x;
  for (int it = 0; it < 30; ++it) {
    double a = std::floor(f);
    if (std::fabs(a) > 1e12) break;
    long ai = long(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 100000) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::fabs(x - double(h1) / double(k1)) < 1e-12 * (1 + std::fabs(x))) break;
    double fr = f - a;
    if (fr < 1e-14) break;
    f = 1 / fr;
  }
  return mpq_class(h1, k1);
}

UP eval_at(const UP& a, const Expr& x) {
  Expr r(0);
  for (int k = deg(a); k >= 0; --k) r = r * x + a[k];
  return UP{r};
}

// Rational roots of a constant-coefficient polynomial; leftover factor returned.
std::vector<Expr> rational_roots(UP a, UP* left) {
  std::vector<Expr> roots;
  int n = deg(a);
  if (n >= 1) {
    std::vector<std::complex<double>> c(n), z(n);
    std::vector<double> co(n + 1);
    double lc = a.back().const_value().get_d();
    for (int k = 0; k <= n; ++k) co[k] = a[k].const_value().get_d() / lc;
    for (int i = 0; i < n; ++i) z[i] = std::pow(std::complex<double>(0.4, 0.9), i);
    for (int it = 0; it < 500; ++it) {
      double delta = 0;
      for (int i = 0; i < n; ++i) {
        std::complex<double> p = 1;
        for (int k = n - 1; k >= 0; --k) p = p * z[i] + co[k];
        std::complex<double> q = 1;
        for (int j = 0; j < n; ++j)
          if (j != i) q *= z[i] - z[j];
        auto dz = p / q;
        z[i] -= dz;
        delta = std::max(delta, std::abs(dz));
      }
      if (delta < 1e-15) break;
    }
    for (auto& r : z) {
      if (std::fabs(r.imag()) > 1e-6 * (1 + std::abs(r))) continue;
      Expr cand(rationalize(r.real()));
      if (deg(a) >= 1 && eval_at(a, cand)[0].zero()) {
        roots.push_back(cand);
        a = quo(a, UP{-cand, Expr(1)});
      }
    }
  }
  *left = a;
  return roots;
}

}  // namespace

Expr antiderivative(const Expr& e, int v) {
  if (e.zero()) return Expr(0);
  const ContextPtr& ctx = e.ctx();
  if (!ctx) throw InputError("antiderivative of a constant without a chart");
  if (ctx->atom(v).kind != AtomKind::Coordinate) throw InputError("integration variable must be a coordinate");
  uint64_t mask = e.num().var_mask() | e.den().var_mask();
  for (int a = 0; a < kMaxVars; ++a)
    if ((mask >> a & 1) && a != v && (ctx->coord_deps(uint64_t(1) << a) >> v & 1))
      throw NotIntegrable("integrand depends on " + ctx->atom(v).name + " through " + ctx->atom(a).name);

  UP N = from_poly(ctx, e.num(), v), D = from_poly(ctx, e.den(), v);
  UP Q, A;
  divmod(N, D, &Q, &A);
  Expr F(0);
  Expr x = Expr::atom(ctx, v);
  {
    UP P{Expr(0)};
    for (size_t k = 0; k < Q.size(); ++k) P.push_back(Q[k] / Expr(long(k + 1)));
    trim(P);
    F += to_expr(ctx, P, v);
  }
  if (!A.empty()) {
    // Hermite reduction (linear version)
    UP Dm = gcd(D, deriv(D));
    UP Ds = quo(D, Dm);
    while (deg(Dm) > 0) {
      UP Dm2 = gcd(Dm, deriv(Dm));
      UP Dms = quo(Dm, Dm2);
      UP B, C;
      diophantine(scale(quo(mul(Ds, deriv(Dm)), Dm), Expr(-1)), Dms, A, &B, &C);
      A = sub(C, quo(mul(deriv(B), Ds), Dms));
      F += to_expr(ctx, B, v) / to_expr(ctx, Dm, v);
      Dm = Dm2;
    }
    trim(A);
    if (!A.empty()) {
      int n = deg(Ds);
      UP dDs = deriv(Ds);
      std::vector<Expr> vals;
      for (int c = 0; c <= n; ++c) vals.push_back(resultant(Ds, sub(A, scale(dDs, Expr(long(c))))));
      UP R = interpolate(vals);
      UP Rs = monic(quo(R, gcd(R, deriv(R))));
      std::vector<Expr> roots;
      UP left;
      if (deg(Rs) == 1) {
        roots.push_back(-Rs[0]);
      } else if (all_const(Rs)) {
        roots = rational_roots(Rs, &left);
      } else {
        left = Rs;
      }
      UP Arest = A, Drest = Ds;
      for (auto& c : roots) {
        UP S = gcd(Ds, sub(A, scale(dDs, c)));
        if (deg(S) < 1) continue;
        // log of the polynomial numerator; the v-free denominator only shifts by a constant in v
        Expr s = to_expr(ctx, S, v);
        Expr g(ctx, s.num());
        F += c * Expr::atom(ctx, ctx->log_atom(g));
        Drest = quo(Drest, S);
      }
      if (deg(left) > 0) {
        // remaining part: residue-free quadratic, try arctan
        Expr done = e - F.diff(v);
        if (deg(Drest) != 2) throw NotIntegrable("denominator does not split over the rationals");
        UP Nr = from_poly(ctx, done.num(), v), Dr = from_poly(ctx, done.den(), v);
        UP q2, r2;
        divmod(Nr, Dr, &q2, &r2);
        if (!q2.empty() || deg(Dr) != 2) throw NotIntegrable("unsupported rational form");
        Expr a = Dr[2], b = Dr[1], c = Dr[0];
        Expr a1 = deg(r2) >= 1 ? r2[1] : Expr(0), a0 = deg(r2) >= 0 ? r2[0] : Expr(0);
        Expr disc = 4 * a * c - b * b;
        Poly sn, sd;
        if (!(sqrt_poly(disc.num(), &sn) && sqrt_poly(disc.den(), &sd)))
          throw NotIntegrable("irrational discriminant");
        Expr s = Expr(ctx, sn, sd);
        Expr Dq = to_expr(ctx, Dr, v);
        if (!a1.zero()) F += a1 / (2 * a) * Expr::atom(ctx, ctx->log_atom(Expr(ctx, Dq.num())));
        Expr k = a0 - a1 * b / (2 * a);
        if (!k.zero()) F += 2 * k / s * Expr::atom(ctx, ctx->arctan_atom((2 * a * x + b) / s));
      }
    }
  }
  Expr chk = F.diff(v) - e;
  if (!is_zero(chk)) throw NotIntegrable("antiderivative failed verification");
  return F;
}

}  // namespace mae
