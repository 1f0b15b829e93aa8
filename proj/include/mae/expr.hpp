#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mae/poly.hpp"

namespace mae {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotIntegrable : CapabilityError {
  using CapabilityError::CapabilityError;
};
struct NearSingular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AtomKind { Coordinate, Parameter, Opaque, Root };

struct Frac {
  Poly num, den{1};
};

struct Atom {
  std::string name;
  AtomKind kind = AtomKind::Coordinate;
  std::string fname;  // applied function name for opaque atoms and trig roots
  int arg = -1;       // argument atom of f(z)-style applications
  Frac arg_expr;      // argument of log/arctan atoms
  Poly rel;           // roots: atom^2 = rel
};

class Expr;
class Context;
using ContextPtr = std::shared_ptr<Context>;

using FnImpls = std::map<std::string, std::function<double(double)>>;

// Atom registry shared by all expressions over one chart. Atoms are only
// ever appended; all access is serialized by a mutex.
class Context : public std::enable_shared_from_this<Context> {
 public:
  static ContextPtr create();

  int coordinate(const std::string& name);
  int parameter(const std::string& name);
  int opaque(const std::string& fname, int arg);
  int root(const std::string& name, const Poly& rel);
  int log_atom(const Expr& g);
  int arctan_atom(const Expr& g);
  int sin_atom(int arg);  // also registers cos(arg) as root with cos^2 = 1 - sin^2
  int cos_atom(int arg) { return sin_atom(arg) + 1; }

  void declare_partial(int atom, int coord, const Expr& value);
  void add_assumption(const Expr& positive);
  std::vector<Frac> assumptions() const;

  std::optional<int> find(const std::string& name) const;
  std::optional<int> find_function(const std::string& fname, int arg) const;
  bool is_function(const std::string& fname) const;
  int size() const;
  Atom atom(int i) const;
  std::vector<std::string> names() const;
  std::vector<int> coordinates() const;
  std::vector<int> roots() const;  // registration order
  bool has_roots() const;
  const Poly& root_rel(int i) const;

  // d(atom)/d(coord) as an expression.
  Expr partial(int atom, int coord);
  // Only what is already recorded; never creates atoms.
  std::optional<Frac> known_partial(int atom, int coord) const;
  // Coordinates an expression over the given atoms may depend on (bit mask).
  uint64_t coord_deps(uint64_t atom_mask) const;

  // Random admissible point: atom values in registration order.
  std::vector<double> sample(std::mt19937_64& g, double lo = -2, double hi = 2) const;
  std::vector<double> atom_values(const std::map<std::string, double>& point, const FnImpls& fns) const;

 private:
  Context() = default;
  int add(Atom a);
  mutable std::mutex mu_;
  std::deque<Atom> atoms_;
  std::map<std::string, int> by_name_;
  std::map<std::pair<int, int>, Frac> partials_;
  std::vector<Frac> assumptions_;
  std::vector<uint64_t> deps_;
  uint64_t root_mask_ = 0;
};

// Canonical rational function: num/den over Z, gcd-free, den with positive
// grlex-leading coefficient, roots to degree < 2 and absent from den.
class Expr {
 public:
  Expr() = default;
  Expr(long c) : num_(c) {}  // NOLINT
  Expr(const mpq_class& q);   // NOLINT
  Expr(ContextPtr ctx, Poly num, Poly den = Poly(1));
  static Expr atom(const ContextPtr& ctx, int i);
  static Expr raw(ContextPtr ctx, Poly num, Poly den);  // already canonical

  const ContextPtr& ctx() const { return ctx_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int k) const;
  Expr inv() const;
  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  bool zero() const { return num_.is_zero(); }  // structural, no sampling
  bool is_const() const { return num_.is_const() && den_.is_const(); }
  mpq_class const_value() const;
  bool depends_on(int atom) const;

  Expr diff(int coord) const;
  std::string str() const;
  double eval(const std::vector<double>& atom_vals) const;
  double eval(const std::map<std::string, double>& point, const FnImpls& fns = {}) const;

 private:
  ContextPtr ctx_;
  Poly num_;
  Poly den_{1};
  friend Expr canon(ContextPtr, Poly, Poly);
};

Expr canon(ContextPtr ctx, Poly num, Poly den);

inline Expr operator+(long a, const Expr& b) { return Expr(a) + b; }
inline Expr operator-(long a, const Expr& b) { return Expr(a) - b; }
inline Expr operator*(long a, const Expr& b) { return Expr(a) * b; }
inline Expr operator/(long a, const Expr& b) { return Expr(a) / b; }

// Zero test: exact; a false verdict is cross-checked numerically.
bool is_zero(const Expr& e);
// Count of nonzero verdicts that numeric sampling could not confirm.
long unconfirmed_nonzero();

Expr diff(const Expr& e, int coord);
double eval_numeric(const Expr& e, const std::map<std::string, double>& point, const FnImpls& fns = {});

// Replace atoms by expressions; atoms depending on a replaced coordinate
// through another atom are rejected with CapabilityError.
Expr subst(const Expr& e, const std::map<int, Expr>& vals);

// Antiderivative w.r.t. a coordinate; throws NotIntegrable.
Expr antiderivative(const Expr& e, int coord);

// Square root helper: returns s with s^2 == e, registering a root atom when
// the square-free part is not a perfect square.
Expr sqrt_expr(const Expr& e, const std::string& root_name);

}  // namespace mae
