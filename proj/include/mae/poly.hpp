#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mae {

constexpr int kMaxVars = 32;

struct Mono {
  std::array<uint16_t, kMaxVars> e{};
  uint32_t deg = 0;

  bool operator==(const Mono& o) const { return deg == o.deg && e == o.e; }
  bool divides(const Mono& o) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Mono operator*(const Mono& o) const;
  Mono operator/(const Mono& o) const;
};

// Graded lexicographic; earlier variables dominate on ties.
inline int cmp(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  for (int i = 0; i < kMaxVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

struct Term {
  Mono m;
  mpz_class c;
};

// Sparse multivariate polynomial over Z, terms sorted by descending grlex.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const mpz_class& c);
  explicit Poly(long c) : Poly(mpz_class(c)) {}
  static Poly var(int v, unsigned k = 1);
  static Poly from_terms(std::vector<Term> ts);  // sorts and combines

  const std::vector<Term>& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].m.deg == 0); }
  bool is_one() const;
  mpz_class const_value() const;  // requires is_const
  const Term& lead() const { return t_.front(); }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly scale(const mpz_class& c) const;
  Poly div_scalar(const mpz_class& c) const;  // exact
  Poly mul_mono(const Mono& m, const mpz_class& c) const;

  int deg(int v) const;
  uint32_t total_deg() const;
  uint64_t var_mask() const;
  std::vector<Poly> coeffs(int v) const;  // index k -> coefficient of v^k
  Poly diff(int v) const;
  mpz_class content() const;
  Poly primitive() const;
  Poly subst(int v, const Poly& val) const;
  // Rewrite v^k -> v^(k mod 2) * rel^(k div 2).
  Poly reduce_square(int v, const Poly& rel) const;
  Poly pow(unsigned k) const;
  double eval(const std::vector<double>& vals) const;

 private:
  std::vector<Term> t_;
  friend Poly make_sorted(std::vector<Term>&&);
};

Poly make_sorted(std::vector<Term>&& ts);  // already sorted, nonzero, distinct

// Exact division test; on success stores the quotient.
bool divide(const Poly& a, const Poly& b, Poly* q);
Poly divexact(const Poly& a, const Poly& b);  // throws if inexact

// Full gcd over Z[x], including integer content; leading coefficient positive.
Poly gcd(const Poly& a, const Poly& b);

// Square-free decomposition a = c * prod f_i^i (f_i primitive, pairwise coprime).
std::vector<std::pair<Poly, int>> squarefree(const Poly& a, mpz_class* content);

// Exact square root if a is a perfect square (up to the content being a square).
bool sqrt_poly(const Poly& a, Poly* r);

std::string to_string(const Poly& p, const std::vector<std::string>& names);

}  // namespace mae
