#include "mae/variational.hpp"

#include <optional>

namespace mae {

Form to_chart(const Form& a) {
  Form r = a;
  while (r.basis() && r.basis()->parent) r = change_basis(r, r.basis(), Direction::Back);
  return r;
}

Form to_coframe(const Form& a, const BasisPtr& omega) {
  std::vector<BasisPtr> chain;
  for (BasisPtr b = omega; b && b != a.basis(); b = b->parent) chain.push_back(b);
  if (chain.empty() || chain.back()->parent != a.basis()) {
    if (a.basis() == omega) return a;
    throw std::logic_error("to_coframe: form basis is not an ancestor");
  }
  Form r = a;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) r = change_basis(r, *it, Direction::Forward);
  return r;
}

Form phi0(const AdaptedCoframe& cf) {
  const BasisPtr& w = cf.omega;
  auto V = extract_V(w, {0, 1, 2, 3, 4});
  for (int i = 4; i < 8; ++i)
    if (!is_zero(V[i])) throw NotEulerLagrange("S2 does not vanish: not Euler-Lagrange");
  Form d0 = Form::from_terms(w, 2, w->dw[0]);
  Form phi(w, 1);
  for (int k = 1; k <= 4; ++k) phi.add_term(1u << k, d0.coeff({0, k}));
  Form dphi = reduce_mod(d(phi), {Form::basis1(w, 0)});
  Expr c = -dphi.coeff({1, 2});
  phi.add_term(1u, c);
  if (!is_zero(d(phi))) throw InputError("no w^0 component closes phi_0");
  return to_chart(phi);
}

namespace {

// Factors worth trying as logarithmic derivatives: square-free parts of the
// coefficient numerators and denominators with monomial content split off,
// plus every non-coordinate atom.
std::vector<Poly> log_candidates(const Form& phi) {
  const ContextPtr& ctx = phi.basis()->ctx;
  std::vector<Poly> out;
  auto add = [&](Poly f) {
    if (f.is_const()) return;
    f = f.primitive();
    if (f.lead().c < 0) f = -f;
    for (auto& g : out)
      if (g == f) return;
    out.push_back(f);
  };
  auto split = [&](const Poly& p) {
    mpz_class content;
    for (auto& [f, k] : squarefree(p, &content)) {
      Mono low = f.terms().front().m;
      for (auto& t : f.terms())
        for (int i = 0; i < kMaxVars; ++i) low.e[i] = std::min(low.e[i], t.m.e[i]);
      Poly rest = f;
      for (int i = 0; i < kMaxVars; ++i) {
        if (!low.e[i]) continue;
        add(Poly::var(i));
        rest = divexact(rest, Poly::var(i, low.e[i]));
      }
      add(rest);
    }
  };
  for (auto& [m, c] : phi.terms()) {
    split(c.num());
    split(c.den());
    uint64_t mask = c.num().var_mask() | c.den().var_mask();
    for (int i = 0; i < kMaxVars; ++i)
      if (mask >> i & 1 && ctx->atom(i).kind != AtomKind::Coordinate && ctx->atom(i).kind != AtomKind::Parameter)
        add(Poly::var(i));
  }
  return out;
}

// Coefficients of a polynomial-valued Expr, keyed by monomial.
void collect(const Expr& e, size_t col, std::map<std::vector<uint16_t>, std::vector<mpq_class>>& rows, size_t width) {
  mpz_class den = e.den().const_value();
  for (auto& t : e.num().terms()) {
    std::vector<uint16_t> key(t.m.e.begin(), t.m.e.end());
    auto& r = rows[key];
    if (r.empty()) r.assign(width, 0);
    r[col] += mpq_class(t.c, den);
  }
}

// lambda with d lambda = 2 lambda phi as a product of powers of candidate
// factors: phi = sum k_i dF_i / F_i with 2 k_i integral.
std::optional<Expr> log_derivative_factor(const Form& phi) {
  const BasisPtr& chart = phi.basis();
  const ContextPtr& ctx = chart->ctx;
  std::vector<Poly> F = log_candidates(phi);
  if (F.empty() || F.size() > 12) return std::nullopt;
  size_t n = F.size();
  std::map<std::vector<uint16_t>, std::vector<mpq_class>> rows;  // columns: k_1..k_n, rhs
  for (size_t j = 0; j < chart->coords.size(); ++j) {
    int v = chart->coords[j];
    Expr e = phi.coeff({int(j)});
    std::vector<Expr> g;
    Expr D = e.den().is_const() ? Expr(1) : Expr(ctx, e.den());
    for (auto& f : F) {
      Expr fe(ctx, f);
      g.push_back(diff(fe, v) / fe);
      if (!g.back().den().is_const()) D *= Expr(ctx, g.back().den());
    }
    std::map<std::vector<uint16_t>, std::vector<mpq_class>> local;
    for (size_t i = 0; i < n; ++i) collect(g[i] * D, i, local, n + 1);
    collect(e * D, n, local, n + 1);
    for (auto& [k, r] : local) {
      std::vector<uint16_t> key = k;
      key.push_back(uint16_t(j));
      rows[key] = r;
    }
  }
  // Gauss-Jordan over Q
  std::vector<std::vector<mpq_class>> M;
  for (auto& [k, r] : rows) M.push_back(r);
  std::vector<int> pivcol;
  size_t rk = 0;
  for (size_t c = 0; c < n && rk < M.size(); ++c) {
    size_t p = rk;
    while (p < M.size() && M[p][c] == 0) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[rk]);
    mpq_class inv = 1 / M[rk][c];
    for (auto& x : M[rk]) x *= inv;
    for (size_t i = 0; i < M.size(); ++i) {
      if (i == rk || M[i][c] == 0) continue;
      mpq_class f = M[i][c];
      for (size_t k = 0; k <= n; ++k) M[i][k] -= f * M[rk][k];
    }
    pivcol.push_back(int(c));
    ++rk;
  }
  for (size_t i = rk; i < M.size(); ++i)
    if (M[i][n] != 0) return std::nullopt;
  Expr lam(1);
  for (size_t i = 0; i < rk; ++i) {
    mpq_class e2 = 2 * M[i][n];
    if (e2.get_den() != 1) return std::nullopt;
    lam *= Expr(ctx, F[pivcol[i]]).pow(int(e2.get_num().get_si()));
  }
  if (!is_zero(dfun(chart, lam) - phi * (2 * lam))) return std::nullopt;
  return lam;
}

Expr normalize_at_base(Expr lam, const BasisPtr& chart, const std::map<std::string, mpq_class>& base, const Form& phi) {
  const ContextPtr& ctx = chart->ctx;
  std::vector<std::map<int, Expr>> bases;
  auto coords = ctx->coordinates();
  if (!base.empty()) {
    std::map<int, Expr> b;
    for (int c : coords) {
      auto it = base.find(ctx->atom(c).name);
      b[c] = it == base.end() ? Expr(0) : Expr(it->second);
    }
    bases.push_back(b);
  }
  for (long v : {0L, 1L, 2L, 3L}) {
    std::map<int, Expr> b;
    for (int c : coords) b[c] = Expr(v);
    bases.push_back(b);
  }
  for (auto& b : bases) {
    try {
      Expr v = subst(lam, b);
      if (v.is_const() && !v.zero()) {
        lam /= v;
        break;
      }
    } catch (const std::domain_error&) {
    } catch (const CapabilityError&) {
      break;
    }
  }
  Form res = dfun(chart, lam) - phi * (2 * lam);
  if (!is_zero(res)) throw std::logic_error("integrating factor failed verification");
  return lam;
}

}  // namespace

Expr integrating_factor(const Form& phi, const std::map<std::string, mpq_class>& base) {
  const BasisPtr& chart = phi.basis();
  if (!chart) return Expr(1);
  const ContextPtr& ctx = chart->ctx;
  if (phi.zero()) return Expr(1);
  Expr F;
  try {
    F = potential(phi);
  } catch (const NotIntegrable&) {
    auto l = log_derivative_factor(phi);
    if (!l) throw;
    return normalize_at_base(*l, chart, base, phi);
  }
  Expr lam(1), rest = F;
  uint64_t mask = F.num().var_mask() | F.den().var_mask();
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(mask >> i & 1)) continue;
    Atom a = ctx->atom(i);
    if (a.kind == AtomKind::Coordinate || a.kind == AtomKind::Parameter) continue;
    if (a.fname != "log") throw NotIntegrable("exp of the potential is not rational (" + a.name + ")");
    Expr c(ctx, F.num().diff(i), F.den());
    if (!c.is_const()) throw NotIntegrable("potential is not linear in " + a.name);
    mpq_class e2 = 2 * c.const_value();
    if (e2.get_den() != 1) throw NotIntegrable("fractional power in the integrating factor");
    long k = e2.get_num().get_si();
    lam *= Expr(ctx, a.arg_expr.num, a.arg_expr.den).pow(int(k));
    rest -= c * Expr::atom(ctx, i);
  }
  if (!rest.is_const()) throw NotIntegrable("potential has a non-logarithmic part");
  return normalize_at_base(lam, chart, base, phi);
}

Form poincare_cartan(const AdaptedCoframe& cf, const Expr& lambda) {
  const BasisPtr& w = cf.omega;
  Form w0 = Form::basis1(w, 0, lambda);
  Form inner = wedge(Form::basis1(w, 1), Form::basis1(w, 2)) - wedge(Form::basis1(w, 3), Form::basis1(w, 4));
  Form Pi = to_chart(wedge(w0, inner));
  if (!is_zero(d(Pi))) throw NotClosed("Poincare-Cartan form is not closed");
  return Pi;
}

Form lagrangian(const Form& Pi) {
  if (Pi.zero()) return Form(Pi.basis(), 2);
  return poincare_primitive(Pi);
}

LagrangianPackage lagrangian_package(const AdaptedCoframe& cf) {
  LagrangianPackage pk;
  pk.phi0 = phi0(cf);
  pk.lambda = integrating_factor(pk.phi0);
  pk.Pi = poincare_cartan(cf, pk.lambda);
  pk.residuals["d_phi0"] = d(pk.phi0);
  pk.residuals["d_lambda_minus_2_lambda_phi0"] = dfun(cf.chart, pk.lambda) - pk.phi0 * (2 * pk.lambda);
  pk.residuals["d_Pi"] = d(pk.Pi);
  try {
    pk.Lambda = lagrangian(pk.Pi);
    pk.have_Lambda = true;
    pk.residuals["d_Lambda_minus_Pi"] = d(pk.Lambda) - pk.Pi;
  } catch (const NotIntegrable& e) {
    pk.Lambda_error = e.what();
  }
  return pk;
}

}  // namespace mae
