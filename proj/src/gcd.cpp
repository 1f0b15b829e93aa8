// Multivariate gcd over Z: modular (Brown) with a cheap coprimality pre-test.
#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include "mae/poly.hpp"

namespace mae {
namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return u64(u128(a) * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

const std::vector<u64>& primes() {
  static std::vector<u64> ps = [] {
    std::vector<u64> v;
    mpz_class c = (mpz_class(1) << 62) - 1;
    while (v.size() < 200) {
      if (mpz_probab_prime_p(c.get_mpz_t(), 30)) v.push_back(c.get_ui());
      c -= 2;
    }
    return v;
  }();
  return ps;
}

std::mt19937_64& rng() {
  thread_local std::mt19937_64 g(0x9e3779b97f4a7c15ULL);
  return g;
}

u64 mod_of(const mpz_class& c, u64 p) {
  u64 r = mpz_fdiv_ui(c.get_mpz_t(), p);
  return r;
}

// ---- dense univariate mod p (low to high) ----
using UP = std::vector<u64>;

void trim(UP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
int udeg(const UP& a) { return int(a.size()) - 1; }

u64 ueval(const UP& a, u64 x, u64 p) {
  u64 r = 0;
  for (size_t i = a.size(); i-- > 0;) r = addmod(mulmod(r, x, p), a[i], p);
  return r;
}

UP umul(const UP& a, const UP& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  UP r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p), p);
  }
  trim(r);
  return r;
}

// a = q*b + r
void udivmod(UP a, const UP& b, u64 p, UP* q, UP* r) {
  int db = udeg(b);
  u64 inv = invmod(b.back(), p);
  UP qq(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  for (int i = udeg(a); i >= db; --i) {
    u64 c = mulmod(a[i], inv, p);
    if (!c) continue;
    qq[i - db] = c;
    for (int j = 0; j <= db; ++j) a[i - db + j] = submod(a[i - db + j], mulmod(c, b[j], p), p);
  }
  trim(a);
  trim(qq);
  if (q) *q = std::move(qq);
  if (r) *r = std::move(a);
}

UP umonic(UP a, u64 p) {
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

UP ugcd(UP a, UP b, u64 p) {
  while (!b.empty()) {
    UP r;
    udivmod(std::move(a), b, p, nullptr, &r);
    a = std::move(b);
    b = std::move(r);
  }
  return umonic(std::move(a), p);
}

// ---- flat sparse multivariate mod p, lex descending over k variables ----
struct FP {
  int k = 0;
  std::vector<uint16_t> e;
  std::vector<u64> c;
  size_t n() const { return c.size(); }
  const uint16_t* m(size_t i) const { return e.data() + i * k; }
};

int lexcmp(const uint16_t* a, const uint16_t* b, int k) {
  for (int i = 0; i < k; ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

void push(FP& f, const uint16_t* m, u64 c) {
  f.e.insert(f.e.end(), m, m + f.k);
  f.c.push_back(c);
}

FP fp_const(int k, u64 c) {
  FP f;
  f.k = k;
  std::vector<uint16_t> z(k, 0);
  push(f, z.data(), c);
  return f;
}

bool fp_is_const(const FP& f) {
  if (f.n() != 1) return false;
  for (int i = 0; i < f.k; ++i)
    if (f.m(0)[i]) return false;
  return true;
}

FP fp_sort(FP f) {
  std::vector<size_t> idx(f.n());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  int k = f.k;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return lexcmp(f.m(a), f.m(b), k) > 0; });
  FP g;
  g.k = k;
  for (size_t i : idx) push(g, f.m(i), f.c[i]);
  return g;
}

FP fp_monic(FP f, u64 p) {
  if (!f.n()) return f;
  u64 inv = invmod(f.c[0], p);
  for (auto& c : f.c) c = mulmod(c, inv, p);
  return f;
}

// Evaluate the last variable.
FP fp_eval_last(const FP& a, u64 x, u64 p) {
  FP r;
  r.k = a.k - 1;
  std::vector<u64> pw{1};
  for (size_t i = 0; i < a.n(); ++i) {
    const uint16_t* m = a.m(i);
    unsigned d = m[a.k - 1];
    while (pw.size() <= d) pw.push_back(mulmod(pw.back(), x, p));
    u64 v = mulmod(a.c[i], pw[d], p);
    if (r.n() && lexcmp(r.m(r.n() - 1), m, r.k) == 0)
      r.c.back() = addmod(r.c.back(), v, p);
    else {
      if (r.n() && r.c.back() == 0) {
        r.c.pop_back();
        r.e.resize(r.e.size() - r.k);
      }
      push(r, m, v);
    }
  }
  if (r.n() && r.c.back() == 0) {
    r.c.pop_back();
    r.e.resize(r.e.size() - r.k);
  }
  return r;
}

struct Group {
  std::vector<uint16_t> rest;
  UP y;
};

std::vector<Group> to_groups(const FP& a) {
  std::vector<Group> g;
  int k = a.k;
  for (size_t i = 0; i < a.n(); ++i) {
    const uint16_t* m = a.m(i);
    if (g.empty() || !std::equal(g.back().rest.begin(), g.back().rest.end(), m)) g.push_back({std::vector<uint16_t>(m, m + k - 1), {}});
    UP& y = g.back().y;
    unsigned d = m[k - 1];
    if (y.size() <= d) y.resize(d + 1, 0);
    y[d] = a.c[i];
  }
  return g;
}

FP from_groups(const std::vector<Group>& g, int k) {
  FP f;
  f.k = k;
  std::vector<uint16_t> m(k);
  for (auto& gr : g) {
    std::copy(gr.rest.begin(), gr.rest.end(), m.begin());
    for (size_t d = gr.y.size(); d-- > 0;) {
      if (!gr.y[d]) continue;
      m[k - 1] = uint16_t(d);
      push(f, m.data(), gr.y[d]);
    }
  }
  return f;
}

FP fp_from_up(const UP& a, int k) {
  // k == 1 only, or constant lifted to k vars
  FP f;
  f.k = k;
  std::vector<uint16_t> m(k, 0);
  for (size_t d = a.size(); d-- > 0;) {
    if (!a[d]) continue;
    if (k) m[k - 1] = uint16_t(d);
    push(f, m.data(), a[d]);
  }
  return f;
}

UP up_from_fp(const FP& f) {
  UP u;
  for (size_t i = 0; i < f.n(); ++i) {
    unsigned d = f.m(i)[0];
    if (u.size() <= d) u.resize(d + 1, 0);
    u[d] = f.c[i];
  }
  trim(u);
  return u;
}

// r - c * x^m * b, all lex sorted
FP fp_submul(const FP& r, const FP& b, const uint16_t* mm, u64 c, u64 p) {
  int k = r.k;
  FP out;
  out.k = k;
  std::vector<uint16_t> t(k);
  size_t i = 0, j = 0;
  while (i < r.n() || j < b.n()) {
    if (j < b.n())
      for (int v = 0; v < k; ++v) t[v] = uint16_t(b.m(j)[v] + mm[v]);
    int cm = i == r.n() ? -1 : j == b.n() ? 1 : lexcmp(r.m(i), t.data(), k);
    if (cm > 0) {
      push(out, r.m(i), r.c[i]);
      ++i;
    } else if (cm < 0) {
      push(out, t.data(), submod(0, mulmod(c, b.c[j], p), p));
      ++j;
    } else {
      u64 v = submod(r.c[i], mulmod(c, b.c[j], p), p);
      if (v) push(out, t.data(), v);
      ++i, ++j;
    }
  }
  return out;
}

bool fp_divides(const FP& b, const FP& a, u64 p) {
  int k = a.k;
  FP r = a;
  u64 inv = invmod(b.c[0], p);
  std::vector<uint16_t> mm(k);
  size_t steps = 0;
  while (r.n()) {
    const uint16_t* lr = r.m(0);
    const uint16_t* lb = b.m(0);
    for (int v = 0; v < k; ++v) {
      if (lr[v] < lb[v]) return false;
      mm[v] = uint16_t(lr[v] - lb[v]);
    }
    r = fp_submul(r, b, mm.data(), mulmod(r.c[0], inv, p), p);
    if (++steps > 1000000) return false;
  }
  return true;
}

UP groups_content(const std::vector<Group>& g, u64 p) {
  UP c = umonic(g[0].y, p);
  for (size_t i = 1; i < g.size() && udeg(c) > 0; ++i) c = ugcd(c, g[i].y, p);
  return c;
}

FP gcdp(const FP& A, const FP& B, u64 p) {
  int k = A.k;
  if (k == 0) return fp_const(0, 1);
  if (k == 1) return fp_from_up(ugcd(up_from_fp(A), up_from_fp(B), p), 1);
  auto ga = to_groups(A), gb = to_groups(B);
  UP ca = groups_content(ga, p), cb = groups_content(gb, p);
  UP c = ugcd(ca, cb, p);
  if (udeg(ca) > 0)
    for (auto& g : ga) udivmod(g.y, ca, p, &g.y, nullptr);
  if (udeg(cb) > 0)
    for (auto& g : gb) udivmod(g.y, cb, p, &g.y, nullptr);
  const UP lca = ga[0].y, lcb = gb[0].y;
  UP gam = ugcd(lca, lcb, p);
  int dA = 0, dB = 0;
  for (auto& g : ga) dA = std::max(dA, udeg(g.y));
  for (auto& g : gb) dB = std::max(dB, udeg(g.y));
  int bound = std::min(dA, dB) + udeg(gam);
  FP Ar = from_groups(ga, k), Br = from_groups(gb, k);

  auto lift_c = [&](FP h) {
    // multiply h by c(y) and make monic
    auto gh = to_groups(h);
    for (auto& g : gh) g.y = umul(g.y, c, p);
    return fp_monic(from_groups(gh, k), p);
  };

  std::vector<Group> H;
  UP q;
  int npts = 0;
  std::vector<uint16_t> lead;
  bool have = false;
  std::uniform_int_distribution<u64> dist(1, p - 1);
  int fails = 0;
  for (;;) {
    u64 a = dist(rng());
    if (!ueval(lca, a, p) || !ueval(lcb, a, p)) continue;
    FP G = gcdp(fp_eval_last(Ar, a, p), fp_eval_last(Br, a, p), p);
    if (fp_is_const(G)) return fp_monic(fp_from_up(c, k), p);
    std::vector<uint16_t> gl(G.m(0), G.m(0) + k - 1);
    bool changed = true;
    u64 ga_ = ueval(gam, a, p);
    for (auto& v : G.c) v = mulmod(v, ga_, p);
    int lc = have ? lexcmp(gl.data(), lead.data(), k - 1) : -2;
    if (!have || lc < 0) {
      H.clear();
      for (size_t i = 0; i < G.n(); ++i) H.push_back({std::vector<uint16_t>(G.m(i), G.m(i) + k - 1), UP{G.c[i]}});
      q = UP{submod(0, a, p), 1};
      npts = 1;
      lead = gl;
      have = true;
      changed = true;
    } else if (lc > 0) {
      continue;
    } else {
      // Newton step: H += q(y) * (G - H(a)) / q(a)
      u64 s = invmod(ueval(q, a, p), p);
      std::vector<Group> nh;
      size_t i = 0, j = 0;
      changed = false;
      auto add = [&](const std::vector<uint16_t>& rest, UP y, u64 ga) {
        u64 diff = submod(ga, ueval(y, a, p), p);
        if (diff) {
          changed = true;
          UP t = umul(q, UP{mulmod(diff, s, p)}, p);
          if (y.size() < t.size()) y.resize(t.size(), 0);
          for (size_t d = 0; d < t.size(); ++d) y[d] = addmod(y[d], t[d], p);
          trim(y);
        }
        if (!y.empty()) nh.push_back({rest, std::move(y)});
      };
      while (i < H.size() || j < G.n()) {
        int cm = i == H.size() ? -1 : j == G.n() ? 1 : lexcmp(H[i].rest.data(), G.m(j), k - 1);
        if (cm > 0) {
          add(H[i].rest, H[i].y, 0);
          ++i;
        } else if (cm < 0) {
          add(std::vector<uint16_t>(G.m(j), G.m(j) + k - 1), UP{}, G.c[j]);
          ++j;
        } else {
          add(H[i].rest, H[i].y, G.c[j]);
          ++i, ++j;
        }
      }
      H = std::move(nh);
      q = umul(q, UP{submod(0, a, p), 1}, p);
      ++npts;
    }
    if (npts > bound || (!changed && npts >= 2)) {
      UP hc = groups_content(H, p);
      std::vector<Group> hp = H;
      if (udeg(hc) > 0)
        for (auto& g : hp) udivmod(g.y, hc, p, &g.y, nullptr);
      FP cand = from_groups(hp, k);
      if (fp_divides(cand, Ar, p) && fp_divides(cand, Br, p)) return lift_c(cand);
      if (npts > bound + 2 || ++fails > 3) {
        have = false;
        fails = 0;
      }
    }
  }
}

// ---- integer level ----

std::vector<int> vars_of(uint64_t mask) {
  std::vector<int> v;
  for (int i = 0; i < kMaxVars; ++i)
    if (mask >> i & 1) v.push_back(i);
  return v;
}

FP to_fp(const Poly& a, const std::vector<int>& vars, u64 p) {
  FP f;
  f.k = int(vars.size());
  std::vector<uint16_t> m(f.k);
  for (auto& t : a.terms()) {
    u64 c = mod_of(t.c, p);
    if (!c) continue;
    for (int i = 0; i < f.k; ++i) m[i] = t.m.e[vars[i]];
    push(f, m.data(), c);
  }
  return fp_sort(std::move(f));
}

// lex-leading integer coefficient w.r.t. vars
const Term& lex_lead(const Poly& a, const std::vector<int>& vars) {
  const Term* best = &a.terms()[0];
  for (auto& t : a.terms()) {
    for (int v : vars) {
      if (t.m.e[v] != best->m.e[v]) {
        if (t.m.e[v] > best->m.e[v]) best = &t;
        break;
      }
    }
  }
  return *best;
}

// Returns true if the pre-test proves gcd(A,B) == 1.
bool coprime_test(const Poly& A, const Poly& B, const std::vector<int>& vars) {
  u64 p = primes()[7];
  std::uniform_int_distribution<u64> dist(1, p - 1);
  std::vector<u64> pt(kMaxVars, 0);
  for (int v : vars) pt[v] = dist(rng());
  auto image = [&](const Poly& P, int v) {
    std::vector<std::vector<u64>> pw(kMaxVars);
    UP u;
    for (auto& t : P.terms()) {
      u64 c = mod_of(t.c, p);
      for (int w : vars) {
        if (w == v || !t.m.e[w]) continue;
        auto& tab = pw[w];
        if (tab.empty()) tab.push_back(1);
        while (tab.size() <= t.m.e[w]) tab.push_back(mulmod(tab.back(), pt[w], p));
        c = mulmod(c, tab[t.m.e[w]], p);
      }
      unsigned d = t.m.e[v];
      if (u.size() <= d) u.resize(d + 1, 0);
      u[d] = addmod(u[d], c, p);
    }
    trim(u);
    return u;
  };
  for (int v : vars) {
    UP a = image(A, v), b = image(B, v);
    if (udeg(a) != A.deg(v) || udeg(b) != B.deg(v)) return false;
    if (udeg(ugcd(a, b, p)) > 0) return false;
  }
  return true;
}

Poly from_crt(const std::vector<std::vector<uint16_t>>& ms, const std::vector<mpz_class>& cs, const mpz_class& M,
              const std::vector<int>& vars) {
  std::vector<Term> ts;
  mpz_class half = M / 2;
  for (size_t i = 0; i < ms.size(); ++i) {
    mpz_class c = cs[i];
    if (c > half) c -= M;
    if (c == 0) continue;
    Term t;
    t.c = c;
    for (size_t j = 0; j < vars.size(); ++j) {
      t.m.e[vars[j]] = ms[i][j];
      t.m.deg += ms[i][j];
    }
    ts.push_back(std::move(t));
  }
  return Poly::from_terms(std::move(ts));
}

Poly gcd_brown(const Poly& A, const Poly& B, const std::vector<int>& vars) {
  int k = int(vars.size());
  mpz_class lA = lex_lead(A, vars).c, lB = lex_lead(B, vars).c;
  mpz_class gam;
  mpz_gcd(gam.get_mpz_t(), lA.get_mpz_t(), lB.get_mpz_t());
  std::vector<std::vector<uint16_t>> ms;
  std::vector<mpz_class> cs;
  mpz_class M = 0;
  Poly prev;
  bool have_prev = false;
  for (u64 p : primes()) {
    if (mod_of(lA, p) == 0 || mod_of(lB, p) == 0) continue;
    FP G = gcdp(to_fp(A, vars, p), to_fp(B, vars, p), p);
    if (fp_is_const(G)) return Poly(1);
    u64 gp = mod_of(gam, p);
    for (auto& c : G.c) c = mulmod(c, gp, p);
    int lc = M == 0 ? -2 : lexcmp(G.m(0), ms[0].data(), k);
    if (M == 0 || lc < 0) {
      ms.clear();
      cs.clear();
      for (size_t i = 0; i < G.n(); ++i) {
        ms.emplace_back(G.m(i), G.m(i) + k);
        cs.emplace_back(mpz_class(std::to_string(G.c[i])));
      }
      M = mpz_class(std::to_string(p));
      have_prev = false;
    } else if (lc > 0) {
      continue;
    } else {
      // CRT merge over the union of monomials
      mpz_class P(std::to_string(p));
      u64 Minv = invmod(mod_of(M, p), p);
      std::vector<std::vector<uint16_t>> nm;
      std::vector<mpz_class> nc;
      size_t i = 0, j = 0;
      auto comb = [&](const mpz_class& h, u64 g) {
        u64 hm = mod_of(h, p);
        u64 t = mulmod(submod(g, hm, p), Minv, p);
        return mpz_class(h + M * mpz_class(std::to_string(t)));
      };
      while (i < ms.size() || j < G.n()) {
        int cm = i == ms.size() ? -1 : j == G.n() ? 1 : lexcmp(ms[i].data(), G.m(j), k);
        if (cm > 0) {
          nm.push_back(ms[i]);
          nc.push_back(comb(cs[i], 0));
          ++i;
        } else if (cm < 0) {
          nm.emplace_back(G.m(j), G.m(j) + k);
          nc.push_back(comb(0, G.c[j]));
          ++j;
        } else {
          nm.push_back(ms[i]);
          nc.push_back(comb(cs[i], G.c[j]));
          ++i, ++j;
        }
      }
      ms = std::move(nm);
      cs = std::move(nc);
      M *= P;
    }
    Poly H = from_crt(ms, cs, M, vars);
    bool small = true;
    mpz_class lim = mpz_class(1) << 40;
    for (auto& t : H.terms())
      if (abs(t.c) > lim) small = false;
    bool stable = have_prev && H == prev;
    prev = H;
    have_prev = true;
    if (!(stable || small)) continue;
    Poly G2 = H.primitive();
    if (divide(A, G2, nullptr) && divide(B, G2, nullptr)) return G2;
  }
  throw std::runtime_error("gcd: ran out of primes");
}

Poly gcd_prim(Poly A, Poly B);

Poly gcd_list(const std::vector<Poly>& ps) {
  Poly g;
  for (auto& p : ps) {
    if (p.is_zero()) continue;
    g = g.is_zero() ? p.primitive() : gcd(g, p);
    if (g.is_const()) return Poly(1);
  }
  return g;
}

Poly gcd_prim(Poly A, Poly B) {
  for (;;) {
    if (A.is_const() || B.is_const()) return Poly(1);
    uint64_t ma = A.var_mask(), mb = B.var_mask();
    if (ma == mb) break;
    uint64_t onlyA = ma & ~mb, onlyB = mb & ~ma;
    if (onlyA) {
      int v = __builtin_ctzll(onlyA);
      A = gcd_list(A.coeffs(v));
    } else {
      int v = __builtin_ctzll(onlyB);
      B = gcd_list(B.coeffs(v));
    }
  }
  auto vars = vars_of(A.var_mask());
  if (coprime_test(A, B, vars)) return Poly(1);
  return gcd_brown(A, B, vars);
}

Mono min_mono(const Poly& a) {
  Mono m = a.terms()[0].m;
  for (auto& t : a.terms())
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], t.m.e[i]);
  m.deg = 0;
  for (int i = 0; i < kMaxVars; ++i) m.deg += m.e[i];
  return m;
}

Poly positive(const Poly& p) { return !p.is_zero() && p.lead().c < 0 ? -p : p; }

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return positive(b);
  if (b.is_zero()) return positive(a);
  mpz_class ca = a.content(), cb = b.content(), c;
  mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_const() || b.is_const()) return Poly(c);
  Poly A = a.div_scalar(ca), B = b.div_scalar(cb);
  Mono mA = min_mono(A), mB = min_mono(B), mg;
  for (int i = 0; i < kMaxVars; ++i) {
    mg.e[i] = std::min(mA.e[i], mB.e[i]);
    mg.deg += mg.e[i];
  }
  if (mA.deg) A = divexact(A, make_sorted({{mA, 1}}));
  if (mB.deg) B = divexact(B, make_sorted({{mB, 1}}));
  Poly G = gcd_prim(std::move(A), std::move(B));
  G = G.mul_mono(mg, c);
  return positive(G);
}

std::vector<std::pair<Poly, int>> squarefree(const Poly& a, mpz_class* content) {
  std::map<int, Poly> acc;
  mpz_class c = a.content();
  if (!a.is_zero() && a.lead().c < 0) c = -c;
  if (content) *content = c;
  Poly cur = a.is_zero() ? a : a.div_scalar(c);
  while (!cur.is_const()) {
    int v = __builtin_ctzll(cur.var_mask());
    Poly cont = gcd_list(cur.coeffs(v));
    Poly pp = divexact(cur, cont);
    // Yun
    Poly d = pp.diff(v);
    Poly g = gcd(pp, d);
    Poly cc = divexact(pp, g);
    Poly dd = divexact(d, g) - cc.diff(v);
    int i = 1;
    while (!cc.is_const()) {
      Poly ai = gcd(cc, dd);
      if (!ai.is_const()) {
        auto it = acc.find(i);
        if (it == acc.end())
          acc.emplace(i, ai);
        else
          it->second = it->second * ai;
      }
      cc = divexact(cc, ai);
      dd = divexact(dd, ai) - cc.diff(v);
      ++i;
    }
    cur = cont.is_const() ? Poly(1) : cont;
  }
  std::vector<std::pair<Poly, int>> out;
  for (auto& [m, f] : acc) out.push_back({positive(f), m});
  return out;
}

bool sqrt_poly(const Poly& a, Poly* r) {
  if (a.is_zero()) {
    if (r) *r = Poly();
    return true;
  }
  const Term& lt = a.lead();
  if (lt.c < 0) return false;
  Mono hm;
  for (int i = 0; i < kMaxVars; ++i) {
    if (lt.m.e[i] & 1) return false;
    hm.e[i] = lt.m.e[i] / 2;
    hm.deg += hm.e[i];
  }
  if (!mpz_perfect_square_p(lt.c.get_mpz_t())) return false;
  mpz_class hc = sqrt(lt.c);
  std::vector<Term> rt{{hm, hc}};
  Poly root = make_sorted(std::vector<Term>(rt));
  Poly res = a - root * root;
  mpz_class two_hc = 2 * hc;
  while (!res.is_zero()) {
    const Term& l = res.lead();
    if (!hm.divides(l.m) || l.m.deg < hm.deg) return false;
    if (!mpz_divisible_p(l.c.get_mpz_t(), two_hc.get_mpz_t())) return false;
    Term t{l.m / hm, 0};
    mpz_divexact(t.c.get_mpz_t(), l.c.get_mpz_t(), two_hc.get_mpz_t());
    if (cmp(t.m, hm) >= 0) return false;
    rt.push_back(t);
    Poly nt = make_sorted({t});
    res = res - (root.scale(2) + nt) * nt;
    root = root + nt;
  }
  if (r) *r = root;
  return true;
}

}  // namespace mae
