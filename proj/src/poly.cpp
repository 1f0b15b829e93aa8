#include "mae/poly.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace mae {

Mono Mono::operator*(const Mono& o) const {
  Mono r;
  for (int i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(e[i]) + o.e[i];
    if (s > 0xffff) throw std::overflow_error("exponent overflow");
    r.e[i] = uint16_t(s);
  }
  r.deg = deg + o.deg;
  return r;
}

Mono Mono::operator/(const Mono& o) const {
  Mono r;
  for (int i = 0; i < kMaxVars; ++i) r.e[i] = uint16_t(e[i] - o.e[i]);
  r.deg = deg - o.deg;
  return r;
}

Poly::Poly(const mpz_class& c) {
  if (c != 0) t_.push_back({Mono{}, c});
}

Poly Poly::var(int v, unsigned k) {
  Poly p;
  Term t;
  t.m.e[v] = uint16_t(k);
  t.m.deg = k;
  t.c = 1;
  p.t_.push_back(std::move(t));
  return p;
}

Poly make_sorted(std::vector<Term>&& ts) {
  Poly p;
  p.t_ = std::move(ts);
  return p;
}

Poly Poly::from_terms(std::vector<Term> ts) {
  std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return cmp(a.m, b.m) > 0; });
  std::vector<Term> out;
  out.reserve(ts.size());
  for (auto& t : ts) {
    if (!out.empty() && out.back().m == t.m)
      out.back().c += t.c;
    else {
      if (!out.empty() && out.back().c == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().c == 0) out.pop_back();
  return make_sorted(std::move(out));
}

bool Poly::is_one() const { return t_.size() == 1 && t_[0].m.deg == 0 && t_[0].c == 1; }

mpz_class Poly::const_value() const {
  if (t_.empty()) return 0;
  if (!is_const()) throw std::logic_error("const_value of nonconstant polynomial");
  return t_[0].c;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

static Poly merge(const Poly& a, const Poly& b, bool sub) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    int c = i == x.size() ? -1 : j == y.size() ? 1 : cmp(x[i].m, y[j].m);
    if (c > 0) {
      out.push_back(x[i++]);
    } else if (c < 0) {
      out.push_back({y[j].m, sub ? mpz_class(-y[j].c) : y[j].c});
      ++j;
    } else {
      mpz_class s = sub ? mpz_class(x[i].c - y[j].c) : mpz_class(x[i].c + y[j].c);
      if (s != 0) out.push_back({x[i].m, std::move(s)});
      ++i, ++j;
    }
  }
  return make_sorted(std::move(out));
}

Poly Poly::operator+(const Poly& o) const { return merge(*this, o, false); }
Poly Poly::operator-(const Poly& o) const { return merge(*this, o, true); }

// Johnson-style heap multiplication: rows a_i * b are merged lazily.
Poly Poly::operator*(const Poly& o) const {
  if (t_.empty() || o.t_.empty()) return Poly();
  const Poly& a = t_.size() <= o.t_.size() ? *this : o;
  const Poly& b = t_.size() <= o.t_.size() ? o : *this;
  if (a.size() == 1) return b.mul_mono(a.t_[0].m, a.t_[0].c);
  struct Node {
    Mono m;
    uint32_t i, j;
  };
  auto less = [](const Node& u, const Node& v) { return cmp(u.m, v.m) < 0; };
  std::priority_queue<Node, std::vector<Node>, decltype(less)> heap(less);
  const auto& at = a.t_;
  const auto& bt = b.t_;
  for (uint32_t i = 0; i < at.size(); ++i) heap.push({at[i].m * bt[0].m, i, 0});
  std::vector<Term> out;
  mpz_class acc, tmp;
  while (!heap.empty()) {
    Node n = heap.top();
    heap.pop();
    mpz_mul(tmp.get_mpz_t(), at[n.i].c.get_mpz_t(), bt[n.j].c.get_mpz_t());
    if (!out.empty() && out.back().m == n.m)
      out.back().c += tmp;
    else {
      if (!out.empty() && out.back().c == 0) out.pop_back();
      out.push_back({n.m, tmp});
    }
    if (n.j + 1 < bt.size()) heap.push({at[n.i].m * bt[n.j + 1].m, n.i, n.j + 1});
  }
  if (!out.empty() && out.back().c == 0) out.pop_back();
  return make_sorted(std::move(out));
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (size_t i = 0; i < t_.size(); ++i)
    if (!(t_[i].m == o.t_[i].m) || t_[i].c != o.t_[i].c) return false;
  return true;
}

Poly Poly::scale(const mpz_class& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::div_scalar(const mpz_class& c) const {
  Poly r = *this;
  for (auto& t : r.t_) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
  return r;
}

Poly Poly::mul_mono(const Mono& m, const mpz_class& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) {
    t.m = t.m * m;
    t.c *= c;
  }
  return r;
}

int Poly::deg(int v) const {
  int d = -1;
  for (auto& t : t_) d = std::max(d, int(t.m.e[v]));
  return t_.empty() ? -1 : d;
}

uint32_t Poly::total_deg() const { return t_.empty() ? 0 : t_[0].m.deg; }

uint64_t Poly::var_mask() const {
  uint64_t m = 0;
  for (auto& t : t_)
    for (int i = 0; i < kMaxVars; ++i)
      if (t.m.e[i]) m |= uint64_t(1) << i;
  return m;
}

std::vector<Poly> Poly::coeffs(int v) const {
  int d = deg(v);
  std::vector<std::vector<Term>> parts(d < 0 ? 0 : d + 1);
  for (auto& t : t_) {
    Term u = t;
    u.m.deg -= u.m.e[v];
    u.m.e[v] = 0;
    parts[t.m.e[v]].push_back(std::move(u));
  }
  // Removing one variable can break grlex order, so re-sort each slice.
  std::vector<Poly> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(from_terms(std::move(p)));
  return out;
}

Poly Poly::diff(int v) const {
  std::vector<Term> out;
  for (auto& t : t_) {
    if (!t.m.e[v]) continue;
    Term u = t;
    u.c *= t.m.e[v];
    u.m.e[v]--;
    u.m.deg--;
    out.push_back(std::move(u));
  }
  return from_terms(std::move(out));
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (auto& t : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Poly Poly::primitive() const {
  if (t_.empty()) return *this;
  mpz_class g = content();
  if (t_[0].c < 0) g = -g;
  return g == 1 ? *this : div_scalar(g);
}

Poly Poly::pow(unsigned k) const {
  Poly r(1), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

Poly Poly::subst(int v, const Poly& val) const {
  auto cs = coeffs(v);
  Poly r;
  for (int k = int(cs.size()) - 1; k >= 0; --k) r = r * val + cs[k];
  return r;
}

Poly Poly::reduce_square(int v, const Poly& rel) const {
  if (deg(v) < 2) return *this;
  auto cs = coeffs(v);
  Poly even, odd, relpow(1);
  for (size_t k = 0; k < cs.size(); k += 2) {
    if (!cs[k].is_zero()) even += cs[k] * relpow;
    if (k + 1 < cs.size() && !cs[k + 1].is_zero()) odd += cs[k + 1] * relpow;
    if (k + 2 < cs.size()) relpow = relpow * rel;
  }
  return even + odd * Poly::var(v);
}

double Poly::eval(const std::vector<double>& vals) const {
  double s = 0;
  for (auto& t : t_) {
    double m = t.c.get_d();
    for (int i = 0; i < kMaxVars && i < int(vals.size()); ++i)
      for (unsigned k = 0; k < t.m.e[i]; ++k) m *= vals[i];
    s += m;
  }
  return s;
}

bool divide(const Poly& a, const Poly& b, Poly* q) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) {
    if (q) *q = Poly();
    return true;
  }
  const Term& lb = b.lead();
  if (b.size() == 1) {
    std::vector<Term> out;
    out.reserve(a.size());
    for (auto& t : a.terms()) {
      if (!lb.m.divides(t.m) || !mpz_divisible_p(t.c.get_mpz_t(), lb.c.get_mpz_t())) return false;
      Term u{t.m / lb.m, 0};
      mpz_divexact(u.c.get_mpz_t(), t.c.get_mpz_t(), lb.c.get_mpz_t());
      out.push_back(std::move(u));
    }
    if (q) *q = make_sorted(std::move(out));
    return true;
  }
  // Quick degree rejection.
  for (int v = 0; v < kMaxVars; ++v) {
    int db = b.deg(v);
    if (db > 0 && a.deg(v) < db) return false;
  }
  Poly r = a;
  std::vector<Term> qt;
  while (!r.is_zero()) {
    const Term& lr = r.lead();
    if (!lb.m.divides(lr.m) || !mpz_divisible_p(lr.c.get_mpz_t(), lb.c.get_mpz_t())) return false;
    if (lr.m.deg < lb.m.deg) return false;
    Term t{lr.m / lb.m, 0};
    mpz_divexact(t.c.get_mpz_t(), lr.c.get_mpz_t(), lb.c.get_mpz_t());
    r = r - b.mul_mono(t.m, t.c);
    qt.push_back(std::move(t));
  }
  if (q) *q = make_sorted(std::move(qt));
  return true;
}

Poly divexact(const Poly& a, const Poly& b) {
  Poly q;
  if (!divide(a, b, &q)) throw std::logic_error("inexact polynomial division");
  return q;
}

static void put_mono(std::ostringstream& os, const Mono& m, const std::vector<std::string>& names, bool first) {
  for (int i = 0; i < kMaxVars; ++i) {
    if (!m.e[i]) continue;
    if (!first) os << '*';
    first = false;
    os << (i < int(names.size()) ? names[i] : "v" + std::to_string(i));
    if (m.e[i] > 1) os << '^' << m.e[i];
  }
}

std::string to_string(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& t : p.terms()) {
    mpz_class c = t.c;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      c = abs(c);
    } else if (c < 0) {
      os << '-';
      c = -c;
    }
    first = false;
    if (t.m.deg == 0) {
      os << c.get_str();
    } else if (c == 1) {
      put_mono(os, t.m, names, true);
    } else {
      os << c.get_str();
      put_mono(os, t.m, names, false);
    }
  }
  return os.str();
}

}  // namespace mae
