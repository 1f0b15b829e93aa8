#include "mae/backlund.hpp"

#include <cmath>
#include <random>

namespace mae {

Form pullback(const Form& a, const Factor& f, const BasisPtr& N) {
  const BasisPtr& M = a.basis();
  std::map<int, Expr> sub;
  std::vector<Form> images(M->n());
  for (int k = 0; k < M->n(); ++k) {
    int at = M->coords[k];
    int pos = -1;
    for (size_t i = 0; i < f.coords.size(); ++i)
      if (f.coords[i] == at) pos = int(i);
    if (pos < 0) throw InputError("factor map has no image for " + M->ctx->atom(at).name);
    if (f.image[pos] != Expr::atom(M->ctx, at)) sub[at] = f.image[pos];
    images[k] = dfun(N, f.image[pos]);
  }
  Form r(N, a.deg());
  for (auto& [m, c] : a.terms()) {
    Form t = Form::scalar(N, subst(c, sub));
    for (int i : mask_indices(m)) t = wedge(t, images[i]);
    r = r + t;
  }
  return r;
}

BacklundCandidate candidate_from_systems(const BasisPtr& N, const MASystem& s1, const Factor& f1,
                                         const MASystem& s2, const Factor& f2) {
  BacklundCandidate c;
  c.basis = N;
  BasisPtr M1 = make_chart(s1.ctx, s1.coords()), M2 = make_chart(s2.ctx, s2.coords());
  c.theta = pullback(contact_form(s1, M1), f1, N);
  c.theta_bar = pullback(contact_form(s2, M2), f2, N);
  c.Omega = pullback(omega_form(s1, M1), f1, N);
  c.Omega_bar = pullback(omega_form(s2, M2), f2, N);
  c.has_Omega = true;
  c.pi1 = f1;
  c.pi2 = f2;
  return c;
}

namespace {

// Coefficient of the single surviving top-degree term, or 0.
Expr top_coeff(const Form& f, uint32_t& mask) {
  if (f.zero()) return Expr(0);
  if (f.terms().size() != 1) throw std::logic_error("reduced 4-form has several terms");
  auto& [m, c] = *f.terms().begin();
  if (mask && m != mask) throw std::logic_error("reduced 4-forms disagree on the top term");
  mask = m;
  return c;
}

int sign_of(const Expr& e) {
  if (e.is_const()) return sgn(e.const_value());
  auto v = classify_sign(e);
  if (v.type == SignType::Positive) return 1;
  if (v.type == SignType::Negative) return -1;
  if (v.type == SignType::Degenerate) return 0;
  throw CapabilityError("sign of " + e.str() + " is not determined");
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  mpz_class n = sqrt(mpz_class(q.get_num())), d = sqrt(mpz_class(q.get_den()));
  if (n * n != q.get_num() || d * d != q.get_den()) return std::nullopt;
  return mpq_class(n, d);
}

}  // namespace

MuEpsilon mu_epsilon(const BacklundCandidate& c) {
  // K is invariant under theta -> f theta, theta_bar -> h theta_bar; fixing the
  // leading coefficient keeps rescaled input from swelling the reduction.
  auto monic = [](const Form& f) {
    if (f.terms().empty()) throw DegeneratePencil("degenerate pencil: zero generator");
    return f * f.terms().rbegin()->second.inv();
  };
  Form th = monic(c.theta), tb = monic(c.theta_bar);
  std::vector<Form> gens{th, tb};
  Form A, B, AA, AB, BB;
  try {
    A = reduce_mod(d(tb), gens);
    B = reduce_mod(d(th), gens);
    AA = reduce_mod(wedge(A, A), gens);
    AB = reduce_mod(wedge(A, B), gens);
    BB = reduce_mod(wedge(B, B), gens);
  } catch (const InputError& e) {
    throw DegeneratePencil(std::string("degenerate pencil: ") + e.what());
  }
  MuEpsilon r;
  uint32_t mask = 0;
  r.a = top_coeff(BB, mask);
  r.b = 2 * top_coeff(AB, mask);
  r.c = top_coeff(AA, mask);
  if (is_zero(r.a) || is_zero(r.c)) throw DegeneratePencil("degenerate pencil: a root at 0 or infinity");
  Expr disc = r.b * r.b - 4 * r.a * r.c;
  if (is_zero(disc)) throw DegeneratePencil("degenerate pencil: double root");
  r.K = r.b * r.b / (r.a * r.c) - 2;
  if (!r.K.is_const()) throw CapabilityError("pencil root ratio is not constant: K = " + r.K.str());
  if (sign_of(disc) < 0) throw InputError("pencil has complex roots");
  mpq_class K = r.K.const_value();
  if (K == 2) throw InputError("eps mu^2 = 1: condition (2) cannot hold");
  int s = sgn(K);
  double Kd = K.get_d();
  r.ratio = (Kd + s * std::sqrt(Kd * Kd - 4)) / 2;
  if (auto q = rational_sqrt(K * K - 4)) r.exact_ratio = mpq_class((K + s * *q) / 2);
  r.epsilon = s;
  r.mu = std::pow(std::fabs(r.ratio), 0.25);
  if (r.exact_ratio) r.special = abs(*r.exact_ratio) == 1;
  else r.special = std::fabs(r.mu - 1) < 1e-12;
  if (r.epsilon == 1 && r.special) throw InputError("eps mu^2 = 1: condition (2) cannot hold");
  return r;
}

namespace {

Mat jacobian(const Factor& f, const BasisPtr& N) {
  Mat J;
  for (auto& e : f.image) {
    Row r;
    for (int c : N->coords) r.push_back(diff(e, c));
    J.push_back(r);
  }
  return J;
}

int numeric_rank(std::vector<std::vector<double>> m) {
  int rows = int(m.size()), cols = rows ? int(m[0].size()) : 0, rk = 0;
  double scale = 0;
  for (auto& r : m)
    for (double v : r) scale = std::max(scale, std::fabs(v));
  double tol = 1e-9 * std::max(scale, 1.0);
  for (int c = 0; c < cols && rk < rows; ++c) {
    int piv = rk;
    for (int i = rk; i < rows; ++i)
      if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
    if (std::fabs(m[piv][c]) <= tol) continue;
    std::swap(m[piv], m[rk]);
    for (int i = rk + 1; i < rows; ++i) {
      double f = m[i][c] / m[rk][c];
      for (int k = c; k < cols; ++k) m[i][k] -= f * m[rk][k];
    }
    ++rk;
  }
  return rk;
}

Mat coeff_rows(const std::vector<Form>& fs) {
  std::map<uint32_t, int> col;
  for (auto& f : fs)
    for (auto& [m, c] : f.terms()) col.emplace(m, 0);
  int k = 0;
  for (auto& [m, i] : col) i = k++;
  Mat M;
  for (auto& f : fs) {
    Row r(col.size(), Expr(0));
    for (auto& [m, c] : f.terms()) r[col[m]] = c;
    M.push_back(r);
  }
  return M;
}

}  // namespace

Rank1Report check_rank1(const BacklundCandidate& c, uint64_t seed, int samples) {
  Rank1Report r;
  const BasisPtr& N = c.basis;
  if (c.pi1 && c.pi2 && N->chart) {
    r.has_projections = true;
    Mat J1 = jacobian(*c.pi1, N), J2 = jacobian(*c.pi2, N);
    Mat Jj = J1;
    Jj.insert(Jj.end(), J2.begin(), J2.end());
    r.rank1 = rank(J1);
    r.rank2 = rank(J2);
    r.rank_joint = rank(Jj);
    std::mt19937_64 g(seed);
    for (int s = 0; s < samples; ++s) {
      std::vector<double> vals;
      try {
        vals = N->ctx->sample(g);
      } catch (const CapabilityError&) {
        break;
      }
      auto num = [&](const Mat& m) {
        std::vector<std::vector<double>> out;
        for (auto& row : m) {
          std::vector<double> o;
          for (auto& e : row) o.push_back(e.eval(vals));
          out.push_back(o);
        }
        return out;
      };
      try {
        ++r.numeric_samples;
        if (numeric_rank(num(J1)) == 5 && numeric_rank(num(J2)) == 5 && numeric_rank(num(Jj)) == N->n()) ++r.numeric_ok;
      } catch (const NearSingular&) {
      }
    }
    r.cond1 = r.rank1 == 5 && r.rank2 == 5 && r.rank_joint == N->n() && r.numeric_ok > 0;
    if (r.rank1 == 5 && r.rank2 == 5 && r.rank_joint == N->n() && r.numeric_ok == 0)
      r.notes.push_back("rank deficiency locus covers all samples");
  } else {
    r.notes.push_back("no projection data: condition (1) not checked");
  }
  std::vector<Form> gens{c.theta, c.theta_bar};
  try {
    Form dt = reduce_mod(d(c.theta), gens), dtb = reduce_mod(d(c.theta_bar), gens);
    r.rank_dtheta = rank(coeff_rows({dt, dtb}));
    if (c.has_Omega) {
      Form om = reduce_mod(c.Omega, gens), omb = reduce_mod(c.Omega_bar, gens);
      r.rank_Omega = rank(coeff_rows({om, omb}));
      r.rank_all = rank(coeff_rows({dt, dtb, om, omb}));
      r.cond2 = r.rank_dtheta == 2 && r.rank_Omega == 2 && r.rank_all == 2;
    } else {
      r.notes.push_back("no Omega forms: condition (2) not checked");
    }
  } catch (const InputError& e) {
    r.notes.push_back(std::string("theta, theta_bar dependent: ") + e.what());
  }
  auto contact = [](const Form& t) { return !is_zero(wedge(t, wedge(d(t), d(t)))); };
  r.contact1 = contact(c.theta);
  r.contact2 = contact(c.theta_bar);
  r.pass = r.cond2 && (!r.has_projections || r.cond1);
  return r;
}

void validate(const LiftingData& l) {
  if (!l.mu.is_const()) throw InputError("mu must be a number");
  if (l.epsilon != 1 && l.epsilon != -1) throw InputError("epsilon must be +1 or -1");
  if (l.mu.const_value() < 1) throw InputError("mu must be >= 1");
  if (l.epsilon == 1 && l.mu.const_value() == 1) throw InputError("eps mu^2 = 1 is excluded");
}

std::string to_string(SpecialType t) {
  switch (t) {
    case SpecialType::I: return "I";
    case SpecialType::IIa: return "IIa";
    case SpecialType::IIb: return "IIb";
    case SpecialType::III: return "III";
    case SpecialType::NotSpecial: return "not-special";
    case SpecialType::Inconsistent: return "inconsistent";
  }
  return "?";
}

ObstructionReport el_obstructions(const LiftingData& l) {
  validate(l);
  auto z = [&](const Expr& e) {
    if (l.numeric && e.is_const()) return std::fabs(e.const_value().get_d()) <= 1e-12;
    return is_zero(e);
  };
  const auto& V = l.V;
  const auto& W = l.W;
  Expr m4 = l.mu.pow(4);
  ObstructionReport r;
  r.Phi = {-m4 * V[0] + l.epsilon * W[0], -m4 * V[1] + W[1], m4 * W[3] - V[3], m4 * W[1] - V[1]};
  r.phi_vanish = z(r.Phi[0]) && z(r.Phi[1]) && z(r.Phi[2]) && z(r.Phi[3]);
  bool special = l.mu.const_value() == 1;
  r.rel51 = l.epsilon == -1 && z(W[0] + V[0]) && z(W[1] - V[1]) && z(W[3] - V[3]);
  if (l.s2t4) r.rel52 = z(V[2] + W[2] + 2 * *l.s2t4);
  if (!r.phi_vanish) {
    r.type = SpecialType::Inconsistent;
    r.notes.push_back("Phi_1..Phi_4 must vanish on a 1-refined lifting relating two Euler-Lagrange systems");
    if (l.epsilon == 1) r.notes.push_back("eps = 1 forces V2 = W2 = 0");
    return r;
  }
  if (!special) {
    r.type = SpecialType::NotSpecial;
    if (l.epsilon == 1) {
      r.notes.push_back("eps = 1: mu > 1 and V2 = W2 = 0");
      r.notes.push_back("either both degenerate or both nondegenerate");
    }
    return r;
  }
  if (!r.rel51 || (r.rel52 && !*r.rel52)) {
    r.type = SpecialType::Inconsistent;
    r.notes.push_back("special relations fail");
    return r;
  }
  if (!r.rel52) r.notes.push_back("V3 + W3 + 2 s2 t4 = 0 not checked (s2 t4 not given)");
  if (!z(V[1])) {
    r.type = SpecialType::III;
    r.notes.push_back("cannot be both degenerate");
  } else if (!z(V[0] * V[3])) {
    r.type = SpecialType::I;
    r.notes.push_back("one of them must be positive, the other negative");
  } else if (z(V[0]) && z(V[3])) {
    r.type = SpecialType::IIa;
    r.notes.push_back("both systems are contact equivalent to z_xy = F(x,y,z,z_x,z_y)");
  } else {
    r.type = SpecialType::IIb;
    r.notes.push_back("each system has a rank-1 integrable characteristic subsystem");
  }
  r.notes.push_back("conclusions hold for values given on a 1-refined lifting");
  return r;
}

SolitonSeed SolitonSeed::zero() {
  auto z = [](double, double) { return 0.0; };
  return {z, z, z};
}

namespace {

double rk4(const std::function<double(double, double)>& f, double t, double v, double h) {
  double k1 = f(t, v), k2 = f(t + h / 2, v + h / 2 * k1), k3 = f(t + h / 2, v + h / 2 * k2), k4 = f(t + h, v + h * k3);
  return v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// xfirst: row y = 0 then columns; otherwise column x = 0 then rows.
std::vector<double> integrate(const SolitonSeed& u, double l, double v0, int nx, int ny, double hx, double hy, bool xfirst) {
  std::vector<double> v(size_t(nx) * ny);
  auto fx = [&](double y) {
    return [&, y](double x, double w) { return u.ux(x, y) - l * std::sin(u.u(x, y) + w); };
  };
  auto fy = [&](double x) {
    return [&, x](double y, double w) { return -u.uy(x, y) + std::sin(u.u(x, y) - w) / l; };
  };
  v[0] = v0;
  if (xfirst) {
    auto f = fx(0);
    for (int i = 1; i < nx; ++i) v[i] = rk4(f, (i - 1) * hx, v[i - 1], hx);
    for (int i = 0; i < nx; ++i) {
      auto g = fy(i * hx);
      for (int j = 1; j < ny; ++j) v[size_t(j) * nx + i] = rk4(g, (j - 1) * hy, v[size_t(j - 1) * nx + i], hy);
    }
  } else {
    auto g = fy(0);
    for (int j = 1; j < ny; ++j) v[size_t(j) * nx] = rk4(g, (j - 1) * hy, v[size_t(j - 1) * nx], hy);
    for (int j = 0; j < ny; ++j) {
      auto f = fx(j * hy);
      for (int i = 1; i < nx; ++i) v[size_t(j) * nx + i] = rk4(f, (i - 1) * hx, v[size_t(j) * nx + i - 1], hx);
    }
  }
  for (double w : v)
    if (!std::isfinite(w)) throw InputError("soliton integration produced a non-finite value");
  return v;
}

}  // namespace

SolitonGrid soliton_propagate(const SolitonSeed& u, double lambda, double v0, int nx, int ny, double hx, double hy) {
  if (lambda == 0 || !std::isfinite(lambda)) throw InputError("lambda must be a nonzero number");
  if (nx < 5 || ny < 5 || !(hx > 0) || !(hy > 0)) throw InputError("grid needs at least 5x5 points and positive steps");
  SolitonGrid g;
  g.nx = nx;
  g.ny = ny;
  g.hx = hx;
  g.hy = hy;
  g.v = integrate(u, lambda, v0, nx, ny, hx, hy, true);
  auto w = integrate(u, lambda, v0, nx, ny, hx, hy, false);
  for (size_t k = 0; k < w.size(); ++k) g.compat = std::max(g.compat, std::fabs(g.v[k] - w[k]));
  // fourth-order centered first differences, composed in x and y
  static const double c[5] = {1, -8, 0, 8, -1};
  for (int j = 2; j < ny - 2; ++j)
    for (int i = 2; i < nx - 2; ++i) {
      double s = 0;
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
          if (c[a] != 0 && c[b] != 0) s += c[a] * c[b] * g.at(i + a - 2, j + b - 2);
      double vxy = s / (144 * hx * hy);
      g.pde = std::max(g.pde, std::fabs(vxy - std::sin(2 * g.at(i, j)) / 2));
    }
  return g;
}

double soliton_closed_form(double lambda, double v0, double x, double y) {
  return 2 * std::atan(std::tan(v0 / 2) * std::exp(-lambda * x - y / lambda));
}

}  // namespace mae
