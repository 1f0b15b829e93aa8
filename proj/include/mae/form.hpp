#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mae/matrix.hpp"

namespace mae {

struct Basis;
using BasisPtr = std::shared_ptr<const Basis>;
class Form;

// Either a coordinate chart (dx_i for context coordinates) or an abstract
// coframe with structure equations and auxiliary scalar differentials.
struct Basis {
  ContextPtr ctx;
  bool chart = true;
  std::vector<std::string> names;  // display names of the basis 1-forms
  std::vector<int> coords;         // chart: context coordinate per index
  // abstract: d(w^i) as 2-form coefficients, mask -> coefficient
  std::vector<std::map<uint32_t, Expr>> dw;
  std::vector<int> aux;                  // context coordinates with declared differentials
  std::vector<std::vector<Expr>> aux_d;  // aux index -> coefficients along each w^k
  // coframe change bookkeeping: w_new = P * w_parent, w_parent = Q * w_new
  BasisPtr parent;
  Mat P, Q;

  int n() const { return int(names.size()); }
  int index_of(const std::string& name) const;
  int aux_index(int atom) const;
  // Structure function C^i_{jk} with dw^i = -1/2 C^i_{jk} w^j w^k.
  Expr C(int i, int j, int k) const;
};

BasisPtr make_chart(const ContextPtr& ctx, const std::vector<int>& coords);
BasisPtr make_abstract(const ContextPtr& ctx, const std::vector<std::string>& names,
                       const std::vector<std::map<uint32_t, Expr>>& dw, const std::vector<int>& aux,
                       const std::vector<std::vector<Expr>>& aux_d);
// New coframe sigma = P * w over an existing basis; structure equations derived.
BasisPtr make_coframe(const BasisPtr& base, const Mat& P, const std::vector<std::string>& names);

class Form {
 public:
  Form() = default;
  Form(BasisPtr b, int deg) : b_(std::move(b)), deg_(deg) {}
  static Form scalar(BasisPtr b, const Expr& f);
  static Form basis1(BasisPtr b, int i, const Expr& c = Expr(1));
  static Form from_terms(BasisPtr b, int deg, const std::map<uint32_t, Expr>& terms);

  const BasisPtr& basis() const { return b_; }
  int deg() const { return deg_; }
  const std::map<uint32_t, Expr>& terms() const { return c_; }
  Expr coeff(uint32_t mask) const;
  Expr coeff(std::initializer_list<int> idx) const;  // any order; sign applied
  void add_term(uint32_t mask, const Expr& c);
  bool zero() const { return c_.empty(); }

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form operator-() const;
  Form operator*(const Expr& f) const;
  bool operator==(const Form& o) const { return deg_ == o.deg_ && c_ == o.c_; }
  std::string str() const;

 private:
  BasisPtr b_;
  int deg_ = 0;
  std::map<uint32_t, Expr> c_;
};

// sign of w^j ^ w^I relative to the sorted product
int insert_sign(int j, uint32_t mask);
int wedge_sign(uint32_t a, uint32_t b);
std::vector<int> mask_indices(uint32_t m);

Form wedge(const Form& a, const Form& b);
Form d(const Form& a);
Form dfun(const BasisPtr& b, const Expr& f);
bool is_zero(const Form& a);

// Re-express a form given over ch's parent in ch's coframe, or back.
enum class Direction { Forward, Back };
Form change_basis(const Form& a, const BasisPtr& ch, Direction dir);
// Substitute images of each basis 1-form (expressed over target).
Form substitute(const Form& a, const std::vector<Form>& images, const BasisPtr& target);

// Reduction modulo the algebraic ideal of 1-forms; result over a's basis.
Form reduce_mod(const Form& a, const std::vector<Form>& gens);

struct Pfaffian {
  std::vector<Form> gens;
  int rank = 0;
  std::vector<Expr> validity;  // pivot values assumed nonzero
};
Pfaffian derived_system(const std::vector<Form>& gens);
int generic_rank(const std::vector<Form>& gens);
// Ranks of I, I', I'', ... ending at the first repeat.
std::vector<int> derived_flag(const std::vector<Form>& gens);

struct NotClosed : InputError {
  using InputError::InputError;
};

// Chart-only primitives by successive coordinate-axis antiderivatives.
Expr potential(const Form& a);
Form poincare_primitive(const Form& a);

}  // namespace mae
