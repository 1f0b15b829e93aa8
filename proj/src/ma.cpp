#include "mae/ma.hpp"

#include <random>

namespace mae {

namespace {

constexpr uint32_t bit(int i) { return 1u << i; }

int coord(const ContextPtr& ctx, const std::string& n) {
  if (auto i = ctx->find(n)) return *i;
  return ctx->coordinate(n);
}

Form pullback(const Form& a, const BasisPtr& chart, const std::map<int, Expr>& old_of_new) {
  std::vector<Form> images;
  for (int c : chart->coords) {
    auto it = old_of_new.find(c);
    images.push_back(it == old_of_new.end() ? dfun(chart, Expr::atom(chart->ctx, c)) : dfun(chart, it->second));
  }
  Form coeffs(chart, a.deg());
  for (auto& [m, c] : a.terms()) coeffs.add_term(m, subst(c, old_of_new));
  return substitute(coeffs, images, chart);
}

}  // namespace

MASystem make_ma_system(ContextPtr ctx) {
  MASystem s;
  s.ctx = ctx;
  s.x = coord(ctx, "x");
  s.y = coord(ctx, "y");
  s.z = coord(ctx, "z");
  s.p = coord(ctx, "p");
  s.q = coord(ctx, "q");
  s.A = s.B = s.C = s.D = s.E = Expr(0);
  return s;
}

Form omega_form(const MASystem& s, const BasisPtr& chart) {
  Form w(chart, 2);
  w.add_term(bit(3) | bit(4), s.A);
  w.add_term(bit(1) | bit(3), -s.B);
  w.add_term(bit(0) | bit(3), s.C);
  w.add_term(bit(1) | bit(4), -s.C);
  w.add_term(bit(0) | bit(4), s.D);
  w.add_term(bit(0) | bit(1), s.E);
  return w;
}

Form contact_form(const MASystem& s, const BasisPtr& chart) {
  Form t(chart, 1);
  t.add_term(bit(2), Expr(1));
  t.add_term(bit(0), -Expr::atom(s.ctx, s.p));
  t.add_term(bit(1), -Expr::atom(s.ctx, s.q));
  return t;
}

MASystem read_coefficients(const MASystem& s, const Form& w) {
  MASystem r = s;
  r.A = w.coeff({3, 4});
  r.B = w.coeff({3, 1});
  Expr xp = w.coeff({0, 3}), yq = w.coeff({1, 4});
  r.C = (xp - yq) / Expr(2);
  r.D = w.coeff({0, 4});
  r.E = w.coeff({0, 1});
  const BasisPtr& chart = w.basis();
  Form theta = contact_form(s, chart);
  Form res = w - omega_form(r, chart) - d(theta) * ((xp + yq) / Expr(2));
  if (!is_zero(reduce_mod(res, {theta}))) throw InputError("2-form is not of Monge-Ampere type modulo the contact ideal");
  return r;
}

MASystem apply_contact(const MASystem& s, int which) {
  const ContextPtr& ctx = s.ctx;
  Expr X = Expr::atom(ctx, s.x), Y = Expr::atom(ctx, s.y), Z = Expr::atom(ctx, s.z), P = Expr::atom(ctx, s.p),
       Q = Expr::atom(ctx, s.q);
  std::map<int, Expr> old;
  switch (which) {
    case 1:  // (x',y',z',p',q') = (p, q, z - px - qy, -x, -y)
      old = {{s.x, -P}, {s.y, -Q}, {s.z, Z - X * P - Y * Q}, {s.p, X}, {s.q, Y}};
      break;
    case 2:  // (p, y, z - px, -x, q)
      old = {{s.x, -P}, {s.z, Z - X * P}, {s.p, X}};
      break;
    case 3:  // (x, q, z - qy, p, -y)
      old = {{s.y, -Q}, {s.z, Z - Y * Q}, {s.q, Y}};
      break;
    case 4:  // (x, y, z + xy, p + y, q + x)
      old = {{s.z, Z - X * Y}, {s.p, P - Y}, {s.q, Q - X}};
      break;
    default:
      throw std::logic_error("unknown contact transformation");
  }
  BasisPtr chart = make_chart(ctx, s.coords());
  Form theta = contact_form(s, chart);
  Form th2 = pullback(theta, chart, old);
  if (!is_zero(reduce_mod(th2, {theta}))) throw std::logic_error("transformation is not contact");
  return read_coefficients(s, pullback(omega_form(s, chart), chart, old));
}

Normalized normalize_E(const MASystem& s) {
  Normalized n;
  MASystem t = s;
  if (is_zero(s.E)) {
    if (is_zero(s.A) && is_zero(s.B) && is_zero(s.D)) {
      if (is_zero(s.C)) throw NotMongeAmpere("all coefficients vanish");
      throw WaveEquivalent("A = B = D = E = 0: wave-equivalent system");
    }
    for (int k = 1; k <= 3; ++k) {
      t = apply_contact(s, k);
      if (!is_zero(t.E)) {
        n.transform = k;
        break;
      }
    }
  }
  n.disc = t.A * t.E - t.B * t.D + t.C * t.C;
  if (is_zero(n.disc)) throw NotMongeAmpere("discriminant AE - BD + C^2 vanishes: not hyperbolic");
  if (n.disc.is_const() && n.disc.const_value() < 0) throw NotMongeAmpere("negative discriminant: not hyperbolic");
  n.scale = t.E;
  Expr ie = t.E.inv();
  n.sys = t;
  n.sys.A = t.A * ie;
  n.sys.B = t.B * ie;
  n.sys.C = t.C * ie;
  n.sys.D = t.D * ie;
  n.sys.E = Expr(1);
  return n;
}

Form adaptation_residual(const BasisPtr& w) {
  Form d0 = Form::from_terms(w, 2, w->dw[0]);
  Form r = d0 - wedge(Form::basis1(w, 1), Form::basis1(w, 2)) - wedge(Form::basis1(w, 3), Form::basis1(w, 4));
  return reduce_mod(r, {Form::basis1(w, 0)});
}

AdaptedCoframe adapted_coframe(const Normalized& n) {
  AdaptedCoframe cf;
  cf.sys = n.sys;
  cf.transform = n.transform;
  const MASystem& s = n.sys;
  const ContextPtr& ctx = s.ctx;
  cf.chart = make_chart(ctx, s.coords());
  cf.mu = sqrt_expr(n.disc, "m") / n.scale;
  if (!is_zero(cf.mu * cf.mu - (s.A - s.B * s.D + s.C * s.C))) throw std::logic_error("mu^2 != A - BD + C^2");
  Expr P = Expr::atom(ctx, s.p), Q = Expr::atom(ctx, s.q), mu = cf.mu;
  Expr z(0), one(1);
  Mat M = {
      {-2 * mu * P, -2 * mu * Q, 2 * mu, z, z},
      {z, one, z, s.C + mu, s.D},
      {-one, z, z, -s.B, mu - s.C},
      {z, one, z, s.C - mu, s.D},
      {one, z, z, s.B, mu + s.C},
  };
  cf.eta = make_coframe(cf.chart, M, {"eta0", "eta1", "eta2", "eta3", "eta4"});
  auto T = [&](int i, int j, int k) {
    auto it = cf.eta->dw[i].find(bit(j) | bit(k));
    return it == cf.eta->dw[i].end() ? Expr(0) : it->second;
  };
  cf.c = {T(1, 3, 4), T(2, 3, 4), T(3, 1, 2), T(4, 1, 2)};
  Mat W = identity(5);
  for (int i = 1; i <= 4; ++i) W[i][0] = -cf.c[i - 1];
  cf.omega = make_coframe(cf.eta, W, {"w0", "w1", "w2", "w3", "w4"});
  if (!is_zero(adaptation_residual(cf.omega))) throw std::logic_error("constructed coframe is not 1-adapted");
  return cf;
}

AdaptedCoframe adapted_coframe(const MASystem& s) {
  try {
    return adapted_coframe(normalize_E(s));
  } catch (const WaveEquivalent&) {
    Normalized n = normalize_E(apply_contact(s, 4));
    n.transform = 4;
    return adapted_coframe(n);
  }
}

std::string to_string(SignType t) {
  switch (t) {
    case SignType::Positive:
      return "positive";
    case SignType::Negative:
      return "negative";
    case SignType::Degenerate:
      return "degenerate";
    case SignType::Indefinite:
      return "indefinite";
  }
  return "?";
}

namespace {

// +1/-1 if every term has even exponents and all coefficients share a sign
int manifest_sign(const Poly& f) {
  int s = 0;
  for (auto& t : f.terms()) {
    for (int i = 0; i < kMaxVars; ++i)
      if (t.m.e[i] & 1) return 0;
    int ts = sgn(t.c);
    if (s && ts != s) return 0;
    s = ts;
  }
  return s;
}

// sign of a squarefree factor; 0 if undecided. used_assumption set when the list decided.
int factor_sign(const ContextPtr& ctx, const Poly& f, const std::vector<Frac>& assume, bool* used_assumption) {
  if (int s = manifest_sign(f)) return s;
  if (ctx && f.size() == 1 && f.terms()[0].m.deg == 1) {
    for (int i = 0; i < kMaxVars; ++i)
      if (f.terms()[0].m.e[i] && ctx->atom(i).kind == AtomKind::Root) return sgn(f.terms()[0].c);
  }
  Poly fp = f.primitive();
  for (auto& a : assume) {
    int ds = manifest_sign(a.den);
    if (!ds) continue;
    Poly ap = a.num.primitive();
    int as = sgn(a.num.lead().c) * sgn(ap.lead().c) * ds;
    if (ap == fp || ap == -fp) {
      *used_assumption = true;
      int rel = ap == fp ? 1 : -1;
      return as * rel * sgn(f.lead().c) * sgn(fp.lead().c);
    }
  }
  return 0;
}

}  // namespace

SignVerdict classify_sign(const Expr& e, uint64_t seed, int samples) {
  SignVerdict v;
  if (is_zero(e)) {
    v.type = SignType::Degenerate;
    v.tier = "zero";
    return v;
  }
  const ContextPtr& ctx = e.ctx();
  std::vector<Frac> assume = ctx ? ctx->assumptions() : std::vector<Frac>{};
  bool used = false, decided = true;
  int sign = 1;
  for (const Poly* part : {&e.num(), &e.den()}) {
    mpz_class content;
    auto fs = squarefree(*part, &content);
    sign *= sgn(content);
    for (auto& [f, mult] : fs) {
      if (mult % 2 == 0) continue;
      int s = factor_sign(ctx, f, assume, &used);
      if (!s) {
        decided = false;
        break;
      }
      sign *= s;
    }
    if (!decided) break;
  }
  if (decided) {
    v.type = sign > 0 ? SignType::Positive : SignType::Negative;
    v.tier = used ? "assumption" : "factorization";
    return v;
  }
  std::mt19937_64 g(seed);
  int pos = 0, neg = 0;
  for (int attempt = 0; attempt < 400 && pos + neg < samples; ++attempt) {
    std::vector<double> pt;
    try {
      pt = ctx->sample(g);
    } catch (const CapabilityError&) {
      break;
    }
    try {
      double x = e.eval(pt);
      if (x > 0) ++pos;
      if (x < 0) ++neg;
    } catch (const NearSingular&) {
    }
  }
  v.samples = pos + neg;
  if (v.samples == 0) throw CapabilityError("no admissible sample point for sign classification");
  v.tier = "sampled";
  v.type = neg == 0 ? SignType::Positive : pos == 0 ? SignType::Negative : SignType::Indefinite;
  return v;
}

std::array<Expr, 8> extract_V(const BasisPtr& b, const std::array<int, 5>& idx) {
  auto T = [&](int i, int k) { return Form::from_terms(b, 2, b->dw[idx[i]]).coeff({idx[0], idx[k]}); };
  Expr half = Expr(mpq_class(1, 2));
  Expr t103 = T(1, 3), t402 = T(4, 2), t104 = T(1, 4), t302 = T(3, 2);
  Expr t203 = T(2, 3), t401 = T(4, 1), t204 = T(2, 4), t301 = T(3, 1);
  return {(t103 - t402) * half, (t104 + t302) * half, (t203 + t401) * half, (t204 - t301) * half,
          (t103 + t402) * half, (t104 - t302) * half, (t203 - t401) * half, (t204 + t301) * half};
}

InvariantReport report_from_V(const std::array<Expr, 8>& V) {
  InvariantReport r;
  r.V = V;
  r.S1 = {{{V[0], V[1]}, {V[2], V[3]}}};
  r.S2 = {{{V[4], V[5]}, {V[6], V[7]}}};
  r.detS1 = V[0] * V[3] - V[1] * V[2];
  r.euler_lagrange = true;
  for (int i = 4; i < 8; ++i) r.euler_lagrange = r.euler_lagrange && is_zero(V[i]);
  r.wave = r.euler_lagrange;
  for (int i = 0; i < 4; ++i) r.wave = r.wave && is_zero(V[i]);
  if (r.euler_lagrange) {
    r.sign = classify_sign(r.detS1);
    r.type = to_string(r.sign.type);
  } else {
    r.type = "not-EL";
  }
  return r;
}

InvariantReport invariants(const AdaptedCoframe& cf) { return report_from_V(extract_V(cf.omega, {0, 1, 2, 3, 4})); }

InvariantReport invariants(const MASystem& s) { return invariants(adapted_coframe(s)); }

Mat gauge_matrix(const GaugeElement& g) {
  Mat m(5, Row(5, Expr(0)));
  if (g.swap) {
    m[0][0] = Expr(1);
    m[1][3] = m[2][4] = m[3][1] = m[4][2] = Expr(1);
    return m;
  }
  Expr da = g.A[0][0] * g.A[1][1] - g.A[0][1] * g.A[1][0];
  Expr db = g.B[0][0] * g.B[1][1] - g.B[0][1] * g.B[1][0];
  if (!is_zero(g.a - da) || !is_zero(g.a - db)) throw InputError("gauge element violates a = det A = det B");
  if (is_zero(g.a)) throw InputError("singular gauge element");
  m[0][0] = g.a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m[1 + i][1 + j] = g.A[i][j];
      m[3 + i][3 + j] = g.B[i][j];
    }
  return m;
}

BasisPtr gauge_transform(const BasisPtr& omega, const GaugeElement& g) {
  Mat gi = inverse(gauge_matrix(g));
  BasisPtr nb = make_coframe(omega, gi, omega->names);
  if (!is_zero(adaptation_residual(nb))) throw std::logic_error("gauge transform broke 1-adaptation");
  return nb;
}

SigmaTensors sigma_tensors(const BasisPtr& w, const std::array<Expr, 8>& V) {
  SigmaTensors t;
  auto put = [&](int i, int j, const Expr& c) {
    if (!c.zero()) t.sigma1[{i, j}] = c;
  };
  put(1, 3, V[2]);
  put(1, 4, -V[0]);
  put(2, 3, V[3]);
  put(2, 4, -V[1]);
  t.sigma2 = Form(w, 2);
  t.sigma2.add_term(bit(1) | bit(3), V[6]);
  t.sigma2.add_term(bit(2) | bit(3), -V[4]);
  t.sigma2.add_term(bit(1) | bit(4), V[7]);
  t.sigma2.add_term(bit(2) | bit(4), -V[5]);
  return t;
}

}  // namespace mae
