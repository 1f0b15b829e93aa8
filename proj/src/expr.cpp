#include "mae/expr.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace mae {

namespace {
std::atomic<long> g_unconfirmed{0};

Frac frac_of(const Expr& e) { return {e.num(), e.den()}; }

std::string render_poly_factor(const Poly& p, const std::vector<std::string>& names, bool paren_if_product) {
  std::string s = to_string(p, names);
  if (p.size() > 1) return "(" + s + ")";
  if (paren_if_product && p.size() == 1) {
    const Term& t = p.lead();
    int nfac = (t.c != 1 ? 1 : 0);
    for (int i = 0; i < kMaxVars; ++i)
      if (t.m.e[i]) ++nfac;
    if (nfac > 1) return "(" + s + ")";
  }
  return s;
}
}  // namespace

// ---------------- Context ----------------

ContextPtr Context::create() { return ContextPtr(new Context()); }

int Context::add(Atom a) {
  std::lock_guard<std::mutex> lk(mu_);
  if (by_name_.count(a.name)) throw InputError("duplicate atom name: " + a.name);
  if (int(atoms_.size()) >= kMaxVars) throw CapabilityError("too many atoms in context");
  int i = int(atoms_.size());
  if (a.kind == AtomKind::Root) root_mask_ |= uint64_t(1) << i;
  by_name_[a.name] = i;
  uint64_t dep = a.kind == AtomKind::Coordinate ? uint64_t(1) << i : 0;
  uint64_t am = a.arg_expr.num.var_mask() | a.arg_expr.den.var_mask() | a.rel.var_mask();
  if (a.arg >= 0) am |= uint64_t(1) << a.arg;
  for (int j = 0; j < i; ++j)
    if (am >> j & 1) dep |= deps_[j];
  deps_.push_back(dep);
  atoms_.push_back(std::move(a));
  return i;
}

int Context::coordinate(const std::string& name) {
  if (auto i = find(name)) {
    if (atom(*i).kind != AtomKind::Coordinate) throw InputError("atom '" + name + "' is not a coordinate");
    return *i;
  }
  Atom a;
  a.name = name;
  a.kind = AtomKind::Coordinate;
  return add(std::move(a));
}

int Context::parameter(const std::string& name) {
  if (auto i = find(name)) {
    if (atom(*i).kind != AtomKind::Parameter) throw InputError("atom '" + name + "' is not a parameter");
    return *i;
  }
  Atom a;
  a.name = name;
  a.kind = AtomKind::Parameter;
  return add(std::move(a));
}

int Context::opaque(const std::string& fname, int arg) {
  std::string name = fname + "(" + atom(arg).name + ")";
  if (auto i = find(name)) return *i;
  Atom a;
  a.name = name;
  a.kind = AtomKind::Opaque;
  a.fname = fname;
  a.arg = arg;
  return add(std::move(a));
}

int Context::root(const std::string& name, const Poly& rel) {
  if (auto i = find(name)) {
    Atom a = atom(*i);
    if (a.kind == AtomKind::Root && a.rel == rel) return *i;
    throw InputError("root name already in use: " + name);
  }
  uint64_t m = rel.var_mask();
  int next = size();
  for (int i = 0; i < kMaxVars; ++i)
    if ((m >> i & 1) && i >= next) throw InputError("root relation uses unknown atom");
  Atom a;
  a.name = name;
  a.kind = AtomKind::Root;
  a.rel = rel;
  return add(std::move(a));
}

int Context::sin_atom(int arg) {
  std::string sname = "sin(" + atom(arg).name + ")";
  if (auto i = find(sname)) return *i;
  Atom s;
  s.name = sname;
  s.kind = AtomKind::Opaque;
  s.fname = "sin";
  s.arg = arg;
  int si = add(std::move(s));
  Atom c;
  c.name = "cos(" + atom(arg).name + ")";
  c.kind = AtomKind::Root;
  c.fname = "cos";
  c.arg = arg;
  c.rel = Poly(1) - Poly::var(si, 2);
  int ci = add(std::move(c));
  if (ci != si + 1) throw std::logic_error("sin/cos registration interleaved");
  std::lock_guard<std::mutex> lk(mu_);
  partials_[{si, arg}] = Frac{Poly::var(ci), Poly(1)};
  return si;
}

int Context::log_atom(const Expr& g) {
  Expr arg = Expr(g.ctx(), g.num().primitive());
  if (arg.is_const()) throw std::logic_error("log of constant");
  std::string name = "log(" + arg.str() + ")";
  if (auto i = find(name)) return *i;
  std::vector<std::pair<int, Expr>> parts;
  for (int c : coordinates()) {
    Expr d = arg.diff(c);
    if (!d.zero()) parts.push_back({c, d / arg});
  }
  Atom a;
  a.name = name;
  a.kind = AtomKind::Opaque;
  a.fname = "log";
  a.arg_expr = {arg.num(), arg.den()};
  int i = add(std::move(a));
  std::lock_guard<std::mutex> lk(mu_);
  for (auto& [c, v] : parts) partials_[{i, c}] = frac_of(v);
  return i;
}

int Context::arctan_atom(const Expr& g) {
  std::string name = "arctan(" + g.str() + ")";
  if (auto i = find(name)) return *i;
  std::vector<std::pair<int, Expr>> parts;
  for (int c : coordinates()) {
    Expr d = g.diff(c);
    if (!d.zero()) parts.push_back({c, d / (1 + g * g)});
  }
  Atom a;
  a.name = name;
  a.kind = AtomKind::Opaque;
  a.fname = "arctan";
  a.arg_expr = {g.num(), g.den()};
  int i = add(std::move(a));
  std::lock_guard<std::mutex> lk(mu_);
  for (auto& [c, v] : parts) partials_[{i, c}] = frac_of(v);
  return i;
}

void Context::declare_partial(int atom_i, int coord, const Expr& value) {
  std::lock_guard<std::mutex> lk(mu_);
  partials_[{atom_i, coord}] = frac_of(value);
  deps_[atom_i] |= uint64_t(1) << coord;
}

void Context::add_assumption(const Expr& e) {
  std::lock_guard<std::mutex> lk(mu_);
  assumptions_.push_back(frac_of(e));
}

std::vector<Frac> Context::assumptions() const {
  std::lock_guard<std::mutex> lk(mu_);
  return assumptions_;
}

std::optional<int> Context::find(const std::string& name) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Context::find_function(const std::string& fname, int arg) const {
  std::lock_guard<std::mutex> lk(mu_);
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].fname == fname && atoms_[i].arg == arg) return int(i);
  return std::nullopt;
}

bool Context::is_function(const std::string& fname) const {
  std::lock_guard<std::mutex> lk(mu_);
  for (auto& a : atoms_)
    if (a.kind == AtomKind::Opaque && a.fname == fname) return true;
  return false;
}

int Context::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return int(atoms_.size());
}

Atom Context::atom(int i) const {
  std::lock_guard<std::mutex> lk(mu_);
  return atoms_.at(i);
}

const Poly& Context::root_rel(int i) const {
  std::lock_guard<std::mutex> lk(mu_);
  return atoms_.at(i).rel;
}

std::vector<std::string> Context::names() const {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<std::string> v;
  for (auto& a : atoms_) v.push_back(a.name);
  return v;
}

std::vector<int> Context::coordinates() const {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<int> v;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].kind == AtomKind::Coordinate) v.push_back(int(i));
  return v;
}

std::vector<int> Context::roots() const {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<int> v;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].kind == AtomKind::Root) v.push_back(int(i));
  return v;
}

bool Context::has_roots() const {
  std::lock_guard<std::mutex> lk(mu_);
  return root_mask_ != 0;
}

std::optional<Frac> Context::known_partial(int ai, int coord) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = partials_.find({ai, coord});
  if (it == partials_.end()) return std::nullopt;
  return it->second;
}

Expr Context::partial(int ai, int coord) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = partials_.find({ai, coord});
    if (it != partials_.end()) return Expr::raw(shared_from_this(), it->second.num, it->second.den);
  }
  Atom a = atom(ai);
  Expr r;
  switch (a.kind) {
    case AtomKind::Coordinate:
      return Expr(ai == coord ? 1 : 0);
    case AtomKind::Parameter:
      return Expr(0);
    case AtomKind::Opaque:
      if (a.arg != coord) return Expr(0);
      if (a.fname == "sin") throw std::logic_error("missing sin partial");
      {
        // undeclared derivative of an applied function becomes a fresh function
        int d = opaque(a.fname + "_" + atom(coord).name, a.arg);
        r = Expr::atom(shared_from_this(), d);
      }
      break;
    case AtomKind::Root: {
      Expr rel(shared_from_this(), a.rel);
      Expr dr = rel.diff(coord);
      r = dr.zero() ? Expr(0) : dr * Expr::atom(shared_from_this(), ai) / (2 * rel);
      break;
    }
  }
  std::lock_guard<std::mutex> lk(mu_);
  partials_[{ai, coord}] = frac_of(r);
  return r;
}

uint64_t Context::coord_deps(uint64_t mask) const {
  std::lock_guard<std::mutex> lk(mu_);
  uint64_t out = 0;
  for (size_t i = 0; i < deps_.size(); ++i)
    if (mask >> i & 1) out |= deps_[i];
  return out;
}

std::vector<double> Context::sample(std::mt19937_64& g, double lo, double hi) const {
  auto uni = [&] { return lo + (hi - lo) * double(g() >> 11) * 0x1.0p-53; };
  std::vector<Atom> as;
  std::vector<Frac> assume;
  {
    std::lock_guard<std::mutex> lk(mu_);
    as.assign(atoms_.begin(), atoms_.end());
    assume = assumptions_;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> v(as.size(), 0.0);
    bool ok = true;
    for (size_t i = 0; i < as.size() && ok; ++i) {
      const Atom& a = as[i];
      switch (a.kind) {
        case AtomKind::Coordinate:
        case AtomKind::Parameter:
          v[i] = uni();
          break;
        case AtomKind::Opaque:
          if (a.fname == "sin")
            v[i] = std::sin(v[a.arg]);
          else if (a.fname == "log" || a.fname == "arctan") {
            double d = a.arg_expr.den.eval(v);
            if (std::fabs(d) < 1e-9) {
              ok = false;
              break;
            }
            double x = a.arg_expr.num.eval(v) / d;
            if (a.fname == "log" && std::fabs(x) < 1e-9) ok = false;
            v[i] = a.fname == "log" ? std::log(std::fabs(x)) : std::atan(x);
          } else
            v[i] = uni();
          break;
        case AtomKind::Root:
          if (a.fname == "cos")
            v[i] = std::cos(v[a.arg]);
          else {
            double r = a.rel.eval(v);
            if (r <= 1e-9) ok = false;
            v[i] = std::sqrt(std::max(r, 0.0));
          }
          break;
      }
    }
    if (!ok) continue;
    for (auto& f : assume) {
      double d = f.den.eval(v);
      if (std::fabs(d) < 1e-9 || f.num.eval(v) / d <= 0) {
        ok = false;
        break;
      }
    }
    if (ok) return v;
  }
  throw CapabilityError("no admissible sample point found");
}

std::vector<double> Context::atom_values(const std::map<std::string, double>& point, const FnImpls& fns) const {
  std::vector<Atom> as;
  std::vector<Frac> assume;
  {
    std::lock_guard<std::mutex> lk(mu_);
    as.assign(atoms_.begin(), atoms_.end());
    assume = assumptions_;
  }
  std::vector<double> v(as.size(), 0.0);
  for (size_t i = 0; i < as.size(); ++i) {
    const Atom& a = as[i];
    auto it = point.find(a.name);
    if (it != point.end()) {
      v[i] = it->second;
      continue;
    }
    auto fn = fns.find(a.fname);
    switch (a.kind) {
      case AtomKind::Coordinate:
      case AtomKind::Parameter:
        // unused atoms get NaN so that any use is visible
        v[i] = std::nan("");
        break;
      case AtomKind::Opaque:
        if (fn != fns.end() && a.arg >= 0)
          v[i] = fn->second(v[a.arg]);
        else if (a.fname == "sin")
          v[i] = std::sin(v[a.arg]);
        else if (a.fname == "log" || a.fname == "arctan") {
          double x = a.arg_expr.num.eval(v) / a.arg_expr.den.eval(v);
          v[i] = a.fname == "log" ? std::log(std::fabs(x)) : std::atan(x);
        } else
          v[i] = std::nan("");
        break;
      case AtomKind::Root:
        if (a.fname == "cos")
          v[i] = fn != fns.end() ? fn->second(v[a.arg]) : std::cos(v[a.arg]);
        else {
          double r = a.rel.eval(v);
          if (r < 0) throw InputError("domain violation: negative radicand for " + a.name);
          v[i] = std::sqrt(r);
        }
        break;
    }
  }
  for (auto& f : assume) {
    double x = f.num.eval(v) / f.den.eval(v);
    if (!(x > 0)) throw InputError("domain violation: point violates a positivity assumption");
  }
  return v;
}

// ---------------- Expr ----------------

Expr::Expr(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  num_ = Poly(mpz_class(c.get_num()));
  den_ = Poly(mpz_class(c.get_den()));
}

Expr::Expr(ContextPtr ctx, Poly num, Poly den) { *this = canon(std::move(ctx), std::move(num), std::move(den)); }

Expr Expr::raw(ContextPtr ctx, Poly num, Poly den) {
  Expr e;
  e.ctx_ = std::move(ctx);
  e.num_ = std::move(num);
  e.den_ = std::move(den);
  return e;
}

Expr Expr::atom(const ContextPtr& ctx, int i) { return raw(ctx, Poly::var(i), Poly(1)); }

static Poly reduce_roots(const ContextPtr& ctx, Poly p, const std::vector<int>& roots) {
  for (size_t k = roots.size(); k-- > 0;) {
    int r = roots[k];
    if (p.deg(r) >= 2) p = p.reduce_square(r, ctx->root_rel(r));
  }
  return p;
}

static uint64_t root_mask_of(const std::vector<int>& roots) {
  uint64_t m = 0;
  for (int r : roots) m |= uint64_t(1) << r;
  return m;
}

Expr canon(ContextPtr ctx, Poly num, Poly den) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  Expr e;
  e.ctx_ = ctx;
  if (num.is_zero()) return e;
  if (ctx && ctx->has_roots()) {
    auto roots = ctx->roots();
    uint64_t rm = root_mask_of(roots);
    if (num.var_mask() & rm) num = reduce_roots(ctx, std::move(num), roots);
    if (den.var_mask() & rm) {
      den = reduce_roots(ctx, std::move(den), roots);
      for (size_t k = roots.size(); k-- > 0;) {
        int r = roots[k];
        if (den.deg(r) < 1) continue;
        auto cs = den.coeffs(r);
        Poly d0 = cs[0], d1 = cs.size() > 1 ? cs[1] : Poly();
        Poly conj = d0 - d1 * Poly::var(r);
        num = reduce_roots(ctx, num * conj, roots);
        den = reduce_roots(ctx, d0 * d0 - d1 * d1 * ctx->root_rel(r), roots);
        if (den.is_zero()) throw std::domain_error("division by zero (after rationalization)");
      }
    }
    if (num.is_zero()) return e;
  }
  Poly g = gcd(num, den);
  if (!g.is_one()) {
    num = divexact(num, g);
    den = divexact(den, g);
  }
  if (den.lead().c < 0) {
    num = -num;
    den = -den;
  }
  e.num_ = std::move(num);
  e.den_ = std::move(den);
  return e;
}

static const ContextPtr& pick(const Expr& a, const Expr& b) {
  if (a.ctx() && b.ctx() && a.ctx() != b.ctx()) throw std::logic_error("expressions from different contexts");
  return a.ctx() ? a.ctx() : b.ctx();
}

Expr Expr::operator-() const { return raw(ctx_, -num_, den_); }

Expr Expr::operator+(const Expr& o) const {
  const ContextPtr& c = pick(*this, o);
  if (num_.is_zero()) return raw(c, o.num_, o.den_);
  if (o.num_.is_zero()) return raw(c, num_, den_);
  if (den_.is_one() && o.den_.is_one()) return raw(c, num_ + o.num_, Poly(1));
  Poly g = gcd(den_, o.den_);
  if (g.is_one()) {
    Poly n = num_ * o.den_ + o.num_ * den_;
    if (n.is_zero()) return raw(c, Poly(), Poly(1));
    return raw(c, std::move(n), den_ * o.den_);
  }
  Poly a1 = divexact(den_, g), b1 = divexact(o.den_, g);
  Poly n = num_ * b1 + o.num_ * a1;
  if (n.is_zero()) return raw(c, Poly(), Poly(1));
  Poly d = den_ * b1;
  Poly h = gcd(n, g);
  if (!h.is_one()) {
    n = divexact(n, h);
    d = divexact(d, h);
  }
  if (d.lead().c < 0) {
    n = -n;
    d = -d;
  }
  return raw(c, std::move(n), std::move(d));
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
  const ContextPtr& c = pick(*this, o);
  if (num_.is_zero() || o.num_.is_zero()) return raw(c, Poly(), Poly(1));
  Poly g1 = o.den_.is_one() ? Poly(1) : gcd(num_, o.den_);
  Poly g2 = den_.is_one() ? Poly(1) : gcd(o.num_, den_);
  Poly n1 = g1.is_one() ? num_ : divexact(num_, g1);
  Poly d2 = g1.is_one() ? o.den_ : divexact(o.den_, g1);
  Poly n2 = g2.is_one() ? o.num_ : divexact(o.num_, g2);
  Poly d1 = g2.is_one() ? den_ : divexact(den_, g2);
  Poly n = n1 * n2, d = d1 * d2;
  if (c && c->has_roots()) {
    auto roots = c->roots();
    for (int r : roots)
      if (n.deg(r) >= 2) return canon(c, std::move(n), std::move(d));
  }
  if (d.lead().c < 0) {
    n = -n;
    d = -d;
  }
  return raw(c, std::move(n), std::move(d));
}

Expr Expr::inv() const {
  if (num_.is_zero()) throw std::domain_error("division by zero");
  if (ctx_ && (num_.var_mask() & root_mask_of(ctx_->roots()))) return canon(ctx_, den_, num_);
  if (num_.lead().c < 0) return raw(ctx_, -den_, -num_);
  return raw(ctx_, den_, num_);
}

Expr Expr::operator/(const Expr& o) const {
  pick(*this, o);
  return *this * o.inv();
}

Expr Expr::pow(int k) const {
  if (k < 0) return inv().pow(-k);
  Expr r(1), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

mpq_class Expr::const_value() const {
  if (!is_const()) throw std::logic_error("expression is not constant");
  mpq_class q(num_.const_value(), den_.const_value());
  q.canonicalize();
  return q;
}

bool Expr::depends_on(int a) const { return ((num_.var_mask() | den_.var_mask()) >> a) & 1; }

Expr Expr::diff(int coord) const {
  if (num_.is_zero() || is_const()) return Expr(0);
  uint64_t mask = num_.var_mask() | den_.var_mask();
  // Fast path: only coordinates and parameters involved.
  bool simple = true;
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(mask >> i & 1)) continue;
    auto k = ctx_->atom(i).kind;
    if (k != AtomKind::Coordinate && k != AtomKind::Parameter) simple = false;
  }
  if (simple) {
    if (!(mask >> coord & 1)) return Expr(0);
    Poly dn = num_.diff(coord), dd = den_.diff(coord);
    if (dd.is_zero()) return Expr(ctx_, dn, den_);
    return Expr(ctx_, dn * den_ - num_ * dd, den_ * den_);
  }
  Expr Dn(0), Dd(0);
  for (int i = 0; i < kMaxVars; ++i) {
    if (!(mask >> i & 1)) continue;
    Expr pa = ctx_->partial(i, coord);
    if (pa.zero()) continue;
    Poly a = num_.diff(i), b = den_.diff(i);
    if (!a.is_zero()) Dn += pa * Expr(ctx_, a);
    if (!b.is_zero()) Dd += pa * Expr(ctx_, b);
  }
  Expr den(ctx_, den_);
  Expr num(ctx_, num_);
  if (Dd.zero()) return Dn / den;
  return (Dn * den - num * Dd) / (den * den);
}

std::string Expr::str() const {
  std::vector<std::string> names;
  if (ctx_) names = ctx_->names();
  if (den_.is_one()) return to_string(num_, names);
  std::string n = num_.size() > 1 ? "(" + to_string(num_, names) + ")" : to_string(num_, names);
  return n + " / " + render_poly_factor(den_, names, true);
}

double Expr::eval(const std::vector<double>& v) const {
  double d = den_.eval(v);
  if (std::fabs(d) < 1e-12) throw NearSingular("near-singular denominator");
  return num_.eval(v) / d;
}

double Expr::eval(const std::map<std::string, double>& point, const FnImpls& fns) const {
  if (!ctx_) return eval(std::vector<double>{});
  return eval(ctx_->atom_values(point, fns));
}

bool is_zero(const Expr& e) {
  if (e.num().is_zero()) return true;
  if (!e.ctx() || e.num().is_const()) return false;
  thread_local std::mt19937_64 g(12345);
  for (int k = 0; k < 3; ++k) {
    std::vector<double> v;
    try {
      v = e.ctx()->sample(g);
    } catch (const CapabilityError&) {
      break;
    }
    double s = 0, a = 0;
    for (auto& t : e.num().terms()) {
      double m = t.c.get_d();
      for (int i = 0; i < kMaxVars && i < int(v.size()); ++i)
        for (unsigned j = 0; j < t.m.e[i]; ++j) m *= v[i];
      s += m;
      a += std::fabs(m);
    }
    if (std::fabs(s) > 1e-9 * a) return false;
  }
  ++g_unconfirmed;
  return false;
}

long unconfirmed_nonzero() { return g_unconfirmed.load(); }

Expr diff(const Expr& e, int coord) { return e.diff(coord); }

double eval_numeric(const Expr& e, const std::map<std::string, double>& point, const FnImpls& fns) {
  return e.eval(point, fns);
}

static Expr subst_poly(const ContextPtr& ctx, const Poly& p, const std::map<int, Expr>& vals,
                       std::map<std::pair<int, unsigned>, Expr>& cache) {
  Expr r(0);
  for (auto& t : p.terms()) {
    Expr m(mpq_class(t.c));
    for (int i = 0; i < kMaxVars; ++i) {
      unsigned k = t.m.e[i];
      if (!k) continue;
      auto key = std::make_pair(i, k);
      auto it = cache.find(key);
      if (it == cache.end()) {
        auto v = vals.find(i);
        Expr b = v == vals.end() ? Expr::atom(ctx, i) : v->second;
        it = cache.emplace(key, b.pow(int(k))).first;
      }
      m *= it->second;
    }
    r += m;
  }
  return r;
}

Expr subst(const Expr& e, const std::map<int, Expr>& vals) {
  if (e.is_const() || vals.empty()) return e;
  const ContextPtr& ctx = e.ctx();
  uint64_t replaced = 0;
  for (auto& [i, v] : vals) replaced |= uint64_t(1) << i;
  uint64_t mask = e.num().var_mask() | e.den().var_mask();
  for (int i = 0; i < kMaxVars; ++i)
    if ((mask >> i & 1) && !(replaced >> i & 1) && (ctx->coord_deps(uint64_t(1) << i) & replaced))
      throw CapabilityError("cannot substitute into " + ctx->atom(i).name);
  std::map<std::pair<int, unsigned>, Expr> cache;
  return subst_poly(ctx, e.num(), vals, cache) / subst_poly(ctx, e.den(), vals, cache);
}

static void split_square_int(mpz_class c, mpz_class* sq, mpz_class* fr) {
  *sq = 1;
  *fr = c < 0 ? -1 : 1;
  c = abs(c);
  for (unsigned long p = 2; p < 2000 && c > 1; ++p) {
    while (mpz_divisible_ui_p(c.get_mpz_t(), p * p)) {
      c /= p * p;
      *sq *= p;
    }
  }
  if (mpz_perfect_square_p(c.get_mpz_t())) {
    *sq *= sqrt(c);
  } else {
    *fr *= c;
  }
}

Expr sqrt_expr(const Expr& e, const std::string& root_name) {
  if (e.zero()) return Expr(0);
  const ContextPtr& ctx = e.ctx();
  Poly P = e.num() * e.den();
  mpz_class c;
  auto fs = squarefree(P, &c);
  mpz_class csq, cfr;
  split_square_int(c, &csq, &cfr);
  Poly sq(csq), fr(cfr);
  for (auto& [f, m] : fs) {
    if (m / 2) sq = sq * f.pow(m / 2);
    if (m % 2) fr = fr * f;
  }
  Expr S(ctx, sq, e.den());
  if (fr.is_one()) return S;
  if (!ctx) throw CapabilityError("square root of a non-square constant");
  if (fr.is_const() && fr.const_value() < 0) throw InputError("square root of a negative constant");
  std::string name = root_name;
  for (int k = 1;; ++k) {
    auto i = ctx->find(name);
    if (!i || (ctx->atom(*i).kind == AtomKind::Root && ctx->atom(*i).rel == fr)) break;
    name = root_name + std::to_string(k);
  }
  int r = ctx->root(name, fr);
  return S * Expr::atom(ctx, r);
}

}  // namespace mae
