#include "mae/form.hpp"

#include <algorithm>
#include <sstream>

namespace mae {

std::vector<int> mask_indices(uint32_t m) {
  std::vector<int> v;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) v.push_back(i);
  return v;
}

int insert_sign(int j, uint32_t mask) { return __builtin_popcount(mask & ((1u << j) - 1)) & 1 ? -1 : 1; }

int wedge_sign(uint32_t a, uint32_t b) {
  int s = 0;
  for (int j : mask_indices(b)) s += __builtin_popcount(a & ~((2u << j) - 1));
  return s & 1 ? -1 : 1;
}

// ---------------- Basis ----------------

int Basis::index_of(const std::string& name) const {
  for (int i = 0; i < n(); ++i)
    if (names[i] == name) return i;
  return -1;
}

int Basis::aux_index(int atom) const {
  for (size_t i = 0; i < aux.size(); ++i)
    if (aux[i] == atom) return int(i);
  return -1;
}

Expr Basis::C(int i, int j, int k) const {
  if (j == k || chart) return Expr(0);
  uint32_t m = (1u << j) | (1u << k);
  auto it = dw[i].find(m);
  if (it == dw[i].end()) return Expr(0);
  return j < k ? -it->second : it->second;
}

BasisPtr make_chart(const ContextPtr& ctx, const std::vector<int>& coords) {
  auto b = std::make_shared<Basis>();
  b->ctx = ctx;
  b->chart = true;
  b->coords = coords;
  for (int c : coords) b->names.push_back("d" + ctx->atom(c).name);
  return b;
}

BasisPtr make_abstract(const ContextPtr& ctx, const std::vector<std::string>& names,
                       const std::vector<std::map<uint32_t, Expr>>& dw, const std::vector<int>& aux,
                       const std::vector<std::vector<Expr>>& aux_d) {
  auto b = std::make_shared<Basis>();
  b->ctx = ctx;
  b->chart = false;
  b->names = names;
  b->dw = dw;
  for (auto& m : b->dw)
    for (auto it = m.begin(); it != m.end();) it = it->second.zero() ? m.erase(it) : std::next(it);
  b->aux = aux;
  b->aux_d = aux_d;
  return b;
}

BasisPtr make_coframe(const BasisPtr& base, const Mat& P, const std::vector<std::string>& names) {
  int n = base->n();
  auto nb = std::make_shared<Basis>();
  nb->ctx = base->ctx;
  nb->chart = false;
  nb->names = names;
  nb->parent = base;
  nb->P = P;
  nb->Q = inverse(P);
  const Mat& Q = nb->Q;
  if (base->chart) {
    nb->aux = base->coords;
    nb->aux_d = Q;
  } else {
    nb->aux = base->aux;
    for (auto& row : base->aux_d) {
      std::vector<Expr> r(n, Expr(0));
      for (int k = 0; k < n; ++k)
        if (!row[k].zero())
          for (int l = 0; l < n; ++l)
            if (!Q[k][l].zero()) r[l] += row[k] * Q[k][l];
      nb->aux_d.push_back(std::move(r));
    }
  }
  nb->dw.assign(n, {});
  BasisPtr cnb = nb;
  std::vector<Form> images;
  for (int j = 0; j < n; ++j) {
    Form f(cnb, 1);
    for (int l = 0; l < n; ++l) f.add_term(1u << l, Q[j][l]);
    images.push_back(f);
  }
  for (int i = 0; i < n; ++i) {
    Form s(base, 1);
    for (int j = 0; j < n; ++j) s.add_term(1u << j, P[i][j]);
    Form ds = d(s);
    nb->dw[i] = substitute(ds, images, cnb).terms();
  }
  return nb;
}

// ---------------- Form ----------------

Form Form::scalar(BasisPtr b, const Expr& f) {
  Form r(std::move(b), 0);
  r.add_term(0, f);
  return r;
}

Form Form::basis1(BasisPtr b, int i, const Expr& c) {
  Form r(std::move(b), 1);
  r.add_term(1u << i, c);
  return r;
}

Form Form::from_terms(BasisPtr b, int deg, const std::map<uint32_t, Expr>& terms) {
  Form r(std::move(b), deg);
  for (auto& [m, c] : terms) r.add_term(m, c);
  return r;
}

Expr Form::coeff(uint32_t mask) const {
  auto it = c_.find(mask);
  return it == c_.end() ? Expr(0) : it->second;
}

Expr Form::coeff(std::initializer_list<int> idx) const {
  uint32_t m = 0;
  int sign = 1;
  for (int i : idx) {
    if (m >> i & 1) return Expr(0);
    // moving i from the right end into place
    sign *= __builtin_popcount(m & ~((2u << i) - 1)) & 1 ? -1 : 1;
    m |= 1u << i;
  }
  Expr c = coeff(m);
  return sign < 0 ? -c : c;
}

void Form::add_term(uint32_t mask, const Expr& c) {
  if (c.zero()) return;
  auto it = c_.find(mask);
  if (it == c_.end()) {
    c_.emplace(mask, c);
    return;
  }
  it->second += c;
  if (it->second.zero()) c_.erase(it);
}

Form Form::operator+(const Form& o) const {
  if (!b_) return o;
  if (o.b_ && o.b_ != b_) throw std::logic_error("basis mismatch");
  Form r = *this;
  for (auto& [m, c] : o.c_) r.add_term(m, c);
  return r;
}

Form Form::operator-() const {
  Form r = *this;
  for (auto& [m, c] : r.c_) c = -c;
  return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator*(const Expr& f) const {
  Form r(b_, deg_);
  if (f.zero()) return r;
  for (auto& [m, c] : c_) r.add_term(m, c * f);
  return r;
}

std::string Form::str() const {
  if (c_.empty()) return "0";
  std::vector<std::pair<std::vector<int>, const Expr*>> ts;
  for (auto& [m, c] : c_) ts.push_back({mask_indices(m), &c});
  std::sort(ts.begin(), ts.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::ostringstream os;
  bool first = true;
  for (auto& [idx, c] : ts) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c->str() << ")";
    if (!idx.empty()) {
      os << "*";
      for (size_t k = 0; k < idx.size(); ++k) os << (k ? "^" : "") << b_->names[idx[k]];
    }
  }
  return os.str();
}

Form wedge(const Form& a, const Form& b) {
  if (a.basis() && b.basis() && a.basis() != b.basis()) throw std::logic_error("basis mismatch in wedge");
  BasisPtr B = a.basis() ? a.basis() : b.basis();
  if (B && a.deg() + b.deg() > B->n()) throw std::logic_error("degree overflow in wedge");
  Form r(B, a.deg() + b.deg());
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      Expr c = ca * cb;
      r.add_term(ma | mb, wedge_sign(ma, mb) < 0 ? -c : c);
    }
  return r;
}

Form dfun(const BasisPtr& b, const Expr& f) {
  Form r(b, 1);
  if (f.zero() || f.is_const()) return r;
  uint64_t deps = b->ctx->coord_deps(f.num().var_mask() | f.den().var_mask());
  if (b->chart) {
    for (int j = 0; j < b->n(); ++j)
      if (deps >> b->coords[j] & 1) r.add_term(1u << j, f.diff(b->coords[j]));
    return r;
  }
  for (size_t a = 0; a < b->aux.size(); ++a) {
    int at = b->aux[a];
    if (!(deps >> at & 1)) continue;
    deps &= ~(uint64_t(1) << at);
    Expr fa = f.diff(at);
    if (fa.zero()) continue;
    for (int k = 0; k < b->n(); ++k)
      if (!b->aux_d[a][k].zero()) r.add_term(1u << k, fa * b->aux_d[a][k]);
  }
  if (deps) throw InputError("scalar depends on a coordinate without a declared differential");
  return r;
}

Form d(const Form& a) {
  const BasisPtr& b = a.basis();
  Form r(b, a.deg() + 1);
  if (!b) return r;
  if (a.deg() >= b->n()) throw std::logic_error("d of a top-degree form");
  for (auto& [m, f] : a.terms()) {
    Form df = dfun(b, f);
    for (auto& [k, c] : df.terms()) {
      int j = __builtin_ctz(k);
      if (m >> j & 1) continue;
      r.add_term(m | k, insert_sign(j, m) < 0 ? -c : c);
    }
    if (b->chart) continue;
    auto idx = mask_indices(m);
    uint32_t left = 0;
    for (size_t s = 0; s < idx.size(); ++s) {
      uint32_t bit = 1u << idx[s];
      uint32_t right = m & ~left & ~bit;
      for (auto& [pm, c] : b->dw[idx[s]]) {
        if ((pm & left) || (pm & right)) continue;
        int sg = (s & 1) ? -1 : 1;
        sg *= wedge_sign(left, pm) * wedge_sign(left | pm, right);
        Expr t = f * c;
        r.add_term(left | pm | right, sg < 0 ? -t : t);
      }
      left |= bit;
    }
  }
  return r;
}

bool is_zero(const Form& a) {
  for (auto& [m, c] : a.terms())
    if (!is_zero(c)) return false;
  return true;
}

Form substitute(const Form& a, const std::vector<Form>& images, const BasisPtr& target) {
  Form r(target, a.deg());
  for (auto& [m, c] : a.terms()) {
    Form t = Form::scalar(target, c);
    for (int i : mask_indices(m)) t = wedge(t, images[i]);
    r = r + t;
  }
  return r;
}

Form change_basis(const Form& a, const BasisPtr& ch, Direction dir) {
  if (!ch->parent) throw std::logic_error("basis has no parent coframe");
  int n = ch->n();
  std::vector<Form> images;
  if (dir == Direction::Forward) {
    if (a.basis() != ch->parent) throw std::logic_error("change_basis: form not over parent basis");
    for (int j = 0; j < n; ++j) {
      Form f(ch, 1);
      for (int l = 0; l < n; ++l) f.add_term(1u << l, ch->Q[j][l]);
      images.push_back(f);
    }
    return substitute(a, images, ch);
  }
  if (a.basis() != ch) throw std::logic_error("change_basis: form not over the coframe");
  for (int l = 0; l < n; ++l) {
    Form f(ch->parent, 1);
    for (int j = 0; j < n; ++j) f.add_term(1u << j, ch->P[l][j]);
    images.push_back(f);
  }
  return substitute(a, images, ch->parent);
}

Form reduce_mod(const Form& a, const std::vector<Form>& gens) {
  const BasisPtr& b = a.basis();
  if (!b || gens.empty()) return a;
  int n = b->n();
  std::vector<int> pivots;
  std::vector<Row> subs;  // w^pivot == subs row (in non-pivot directions) mod gens
  for (auto& g : gens) {
    if (g.basis() != b || g.deg() != 1) throw std::logic_error("reduce_mod: generators must be 1-forms on the same basis");
    Row row(n, Expr(0));
    for (auto& [m, c] : g.terms()) row[__builtin_ctz(m)] = c;
    for (size_t s = 0; s < pivots.size(); ++s) {
      int p = pivots[s];
      if (row[p].zero()) continue;
      Expr f = row[p];
      row[p] = Expr(0);
      for (int l = 0; l < n; ++l)
        if (!subs[s][l].zero()) row[l] += f * subs[s][l];
    }
    int piv = -1;
    for (int l = 0; l < n && piv < 0; ++l)
      if (!row[l].zero() && row[l].is_const()) piv = l;
    for (int l = 0; l < n && piv < 0; ++l)
      if (!row[l].zero()) piv = l;
    if (piv < 0) throw InputError("reduce_mod: dependent generators");
    Expr inv = -row[piv].inv();
    Row sub(n, Expr(0));
    for (int l = 0; l < n; ++l)
      if (l != piv && !row[l].zero()) sub[l] = row[l] * inv;
    for (auto& old : subs) {
      if (old[piv].zero()) continue;
      Expr f = old[piv];
      old[piv] = Expr(0);
      for (int l = 0; l < n; ++l)
        if (!sub[l].zero()) old[l] += f * sub[l];
    }
    pivots.push_back(piv);
    subs.push_back(std::move(sub));
  }
  std::vector<Form> images;
  for (int j = 0; j < n; ++j) images.push_back(Form::basis1(b, j));
  for (size_t s = 0; s < pivots.size(); ++s) {
    Form f(b, 1);
    for (int l = 0; l < n; ++l) f.add_term(1u << l, subs[s][l]);
    images[pivots[s]] = f;
  }
  return substitute(a, images, b);
}

int generic_rank(const std::vector<Form>& gens) {
  if (gens.empty()) return 0;
  int n = gens[0].basis()->n();
  Mat m;
  for (auto& g : gens) {
    Row r(n, Expr(0));
    for (auto& [k, c] : g.terms()) r[__builtin_ctz(k)] = c;
    m.push_back(r);
  }
  return rank(m);
}

Pfaffian derived_system(const std::vector<Form>& gens) {
  Pfaffian out;
  if (gens.empty()) return out;
  std::vector<Form> red;
  std::map<uint32_t, int> rows;
  for (auto& g : gens) {
    red.push_back(reduce_mod(d(g), gens));
    for (auto& [m, c] : red.back().terms()) rows.emplace(m, 0);
  }
  int r = 0;
  for (auto& [m, i] : rows) i = r++;
  Mat M(r, Row(gens.size(), Expr(0)));
  for (size_t i = 0; i < gens.size(); ++i)
    for (auto& [m, c] : red[i].terms()) M[rows[m]][i] = c;
  std::vector<Row> ker;
  if (r == 0) {
    for (size_t i = 0; i < gens.size(); ++i) {
      Row v(gens.size(), Expr(0));
      v[i] = Expr(1);
      ker.push_back(v);
    }
  } else {
    ker = nullspace(M);
  }
  for (auto& v : ker) {
    Form f(gens[0].basis(), 1);
    for (size_t i = 0; i < gens.size(); ++i)
      if (!v[i].zero()) f = f + gens[i] * v[i];
    out.gens.push_back(f);
  }
  out.rank = generic_rank(out.gens);
  return out;
}

std::vector<int> derived_flag(const std::vector<Form>& gens) {
  std::vector<int> ranks{generic_rank(gens)};
  std::vector<Form> cur = gens;
  while (ranks.back() > 0) {
    Pfaffian p = derived_system(cur);
    if (p.rank == ranks.back()) break;
    ranks.push_back(p.rank);
    cur = p.gens;
  }
  return ranks;
}

// ---------------- primitives ----------------

namespace {

Form primitive_along(const Form& a, const std::vector<int>& order, size_t pos) {
  const BasisPtr& b = a.basis();
  if (a.zero()) return Form(b, a.deg() - 1);
  if (pos == order.size()) throw NotIntegrable("primitive: residual left after all coordinates");
  int j = order[pos];
  int coord = b->coords[j];
  uint32_t bit = 1u << j;
  Form A(b, a.deg() - 1);
  for (auto& [m, f] : a.terms()) {
    if (!(m & bit)) continue;
    uint32_t rest = m & ~bit;
    Expr g = antiderivative(f, coord);
    A.add_term(rest, insert_sign(j, rest) < 0 ? -g : g);
  }
  Form rem = A.zero() ? a : a - d(A);
  for (auto& [m, f] : rem.terms())
    if (m & bit) throw std::logic_error("primitive: residual kept a dx component");
  return A + primitive_along(rem, order, pos + 1);
}

std::vector<std::vector<int>> orders(int n) {
  std::vector<int> base(n);
  for (int i = 0; i < n; ++i) base[i] = i;
  std::vector<std::vector<int>> out{base};
  std::vector<int> rev(base.rbegin(), base.rend());
  out.push_back(rev);
  for (int r = 1; r < n; ++r) {
    std::vector<int> rot(n);
    for (int i = 0; i < n; ++i) rot[i] = base[(i + r) % n];
    out.push_back(rot);
  }
  return out;
}

}  // namespace

Form poincare_primitive(const Form& a) {
  const BasisPtr& b = a.basis();
  if (!b || !b->chart) throw InputError("primitive requires a coordinate chart");
  if (a.deg() < 1) throw InputError("primitive of a 0-form");
  if (!is_zero(d(a))) throw NotClosed("form is not closed");
  std::string last;
  for (auto& ord : orders(b->n())) {
    try {
      Form p = primitive_along(a, ord, 0);
      Form res = d(p) - a;
      if (!res.zero()) throw std::logic_error("primitive failed verification");
      return p;
    } catch (const NotIntegrable& e) {
      last = e.what();
    }
  }
  throw NotIntegrable("no primitive found: " + last);
}

Expr potential(const Form& a) {
  if (a.deg() != 1) throw InputError("potential expects a 1-form");
  Form p = poincare_primitive(a);
  return p.coeff(0u);
}

}  // namespace mae
