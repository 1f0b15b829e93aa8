#include "mae/frameverify.hpp"

#include <chrono>

namespace mae {

FrameCheckReport check_involutive(const BasisPtr& b) {
  auto t0 = std::chrono::steady_clock::now();
  FrameCheckReport r;
  for (int i = 0; i < b->n(); ++i) {
    Form dw = b->chart ? Form(b, 2) : Form::from_terms(b, 2, b->dw[i]);
    Form dd = b->n() > 2 ? d(dw) : Form(b, 3);
    r.residuals.push_back({"d2 " + b->names[i], dd});
    if (!is_zero(dd)) r.pass = false;
  }
  for (size_t a = 0; a < b->aux.size(); ++a) {
    Form da(b, 1);
    for (int k = 0; k < b->n(); ++k) da.add_term(1u << k, b->aux_d[a][k]);
    Form dd = d(da);
    r.residuals.push_back({"d2 " + b->ctx->atom(b->aux[a]).name, dd});
    if (!is_zero(dd)) r.pass = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool check_invariant_locus(const BasisPtr& b, const Expr& f) {
  Form df = dfun(b, f);
  if (df.zero()) return true;
  if (f.zero()) return false;
  for (auto& [m, c] : df.terms()) {
    Expr q = c / f;
    if (!gcd(q.den(), f.num()).is_const()) return false;
  }
  return true;
}

BasisPtr restrict_locus(const BasisPtr& b, const std::map<int, Expr>& subs) {
  if (b->chart) throw InputError("restrict_locus expects an abstract frame");
  std::vector<std::map<uint32_t, Expr>> dw(b->n());
  for (int i = 0; i < b->n(); ++i)
    for (auto& [m, c] : b->dw[i]) {
      Expr v = subst(c, subs);
      if (!v.zero()) dw[i][m] = v;
    }
  std::vector<int> aux;
  std::vector<std::vector<Expr>> aux_d;
  std::vector<std::pair<int, std::vector<Expr>>> eliminated;
  for (size_t a = 0; a < b->aux.size(); ++a) {
    std::vector<Expr> row;
    for (auto& c : b->aux_d[a]) row.push_back(subst(c, subs));
    if (subs.count(b->aux[a]))
      eliminated.push_back({b->aux[a], row});
    else {
      aux.push_back(b->aux[a]);
      aux_d.push_back(row);
    }
  }
  for (auto& [atom, e] : subs)
    if (b->aux_index(atom) < 0) throw InputError("substituted symbol is not an aux scalar: " + b->ctx->atom(atom).name);
  BasisPtr nb = make_abstract(b->ctx, b->names, dw, aux, aux_d);
  for (auto& [atom, row] : eliminated) {
    Form declared(nb, 1);
    for (int k = 0; k < nb->n(); ++k) declared.add_term(1u << k, row[k]);
    Form res = declared - dfun(nb, subs.at(atom));
    if (!is_zero(res))
      throw InputError("inconsistent substitution for " + b->ctx->atom(atom).name + ": residual " + res.str());
  }
  return nb;
}

BasisPtr complete_coframe(const BasisPtr& b, const std::vector<Form>& five, const std::vector<std::string>& names) {
  int n = b->n();
  Mat P;
  for (auto& f : five) {
    if (f.basis() != b || f.deg() != 1) throw InputError("coframe entries must be 1-forms on the frame");
    Row r(n, Expr(0));
    for (auto& [m, c] : f.terms()) r[__builtin_ctz(m)] = c;
    P.push_back(r);
  }
  std::vector<std::string> nm = names;
  while (int(P.size()) < n) {
    bool added = false;
    for (int j = 0; j < n && !added; ++j) {
      Mat Q = P;
      Row r(n, Expr(0));
      r[j] = Expr(1);
      Q.push_back(r);
      if (rank(Q) == int(Q.size())) {
        P = Q;
        nm.push_back("c" + b->names[j]);
        added = true;
      }
    }
    if (!added) throw InputError("coframe entries are dependent");
  }
  return make_coframe(b, P, nm);
}

Form adaptation_residual_mod(const BasisPtr& c) {
  Form d0 = Form::from_terms(c, 2, c->dw[0]);
  Form r = d0 - wedge(Form::basis1(c, 1), Form::basis1(c, 2)) - wedge(Form::basis1(c, 3), Form::basis1(c, 4));
  std::vector<Form> gens{Form::basis1(c, 0)};
  for (int k = 5; k < c->n(); ++k) gens.push_back(Form::basis1(c, k));
  return reduce_mod(r, gens);
}

InvariantReport abstract_invariants(const BasisPtr& b, const std::vector<Form>& five) {
  if (five.size() != 5) throw InputError("abstract_invariants needs five 1-forms");
  BasisPtr c = complete_coframe(b, five, {"s0", "s1", "s2", "s3", "s4"});
  Form res = adaptation_residual_mod(c);
  if (!is_zero(res)) throw NotAdapted("coframe is not 1-adapted: residual " + res.str());
  return report_from_V(extract_V(c, {0, 1, 2, 3, 4}));
}

bool check_exact(const Form& a) { return is_zero(d(a)); }

}  // namespace mae
