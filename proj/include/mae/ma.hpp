#pragma once

#include <array>
#include <string>
#include <vector>

#include "mae/form.hpp"

namespace mae {

// A(z_xx z_yy - z_xy^2) + B z_xx + 2C z_xy + D z_yy + E = 0 on the chart (x,y,z,p,q).
struct MASystem {
  ContextPtr ctx;
  int x = -1, y = -1, z = -1, p = -1, q = -1;
  Expr A, B, C, D, E;

  std::vector<int> coords() const { return {x, y, z, p, q}; }
};

// Context with coordinates x,y,z,p,q registered in that order.
MASystem make_ma_system(ContextPtr ctx);

struct NotMongeAmpere : InputError {
  using InputError::InputError;
};
// A = B = D = E = 0, C != 0: contact-equivalent to z_xy = 0.
struct WaveEquivalent : NotMongeAmpere {
  using NotMongeAmpere::NotMongeAmpere;
};
struct NotEulerLagrange : InputError {
  using InputError::InputError;
};

// Omega = A dp^dq + B dp^dy + C(dx^dp - dy^dq) + D dx^dq + E dx^dy on the chart.
Form omega_form(const MASystem& s, const BasisPtr& chart);
Form contact_form(const MASystem& s, const BasisPtr& chart);
// Read A..E back from a 2-form congruent to Omega modulo theta and dtheta.
MASystem read_coefficients(const MASystem& s, const Form& omega);

// transform: 0 = scaling only, 1..3 = contact maps tried in order,
// 4 = the shift z -> z + xy used for wave-equivalent systems.
struct Normalized {
  MASystem sys;  // E == 1
  int transform = 0;
  Expr disc;   // AE - BD + C^2 before scaling
  Expr scale;  // E before scaling
};
Normalized normalize_E(const MASystem& s);
// Pull back by one of the contact maps above (new coordinates reuse the same atoms).
MASystem apply_contact(const MASystem& s, int which);

struct AdaptedCoframe {
  MASystem sys;  // E-normalized
  int transform = 0;
  BasisPtr chart, eta, omega;
  Expr mu;
  std::array<Expr, 4> c;
};
AdaptedCoframe adapted_coframe(const Normalized& n);
AdaptedCoframe adapted_coframe(const MASystem& s);

// dw^0 - w^1^w^2 - w^3^w^4 reduced modulo w^0.
Form adaptation_residual(const BasisPtr& omega);

using Mat2 = std::array<std::array<Expr, 2>, 2>;

enum class SignType { Positive, Negative, Degenerate, Indefinite };
std::string to_string(SignType t);

struct SignVerdict {
  SignType type = SignType::Indefinite;
  std::string tier;  // zero, assumption, factorization, sampled
  int samples = 0;
};
// Exact tiers first; random samples only when no factor sign is decided.
SignVerdict classify_sign(const Expr& e, uint64_t seed = 0, int samples = 32);

struct InvariantReport {
  Mat2 S1, S2;
  std::array<Expr, 8> V;
  Expr detS1;
  bool euler_lagrange = false;
  bool wave = false;
  std::string type;  // positive, negative, degenerate, indefinite, not-EL
  SignVerdict sign;
};

// V_1..V_8 from the w^0^w^k coefficients of dw^i, i = 1..4, over a basis
// whose first five symbols (at the given indices) form the adapted coframe.
std::array<Expr, 8> extract_V(const BasisPtr& b, const std::array<int, 5>& idx);
InvariantReport report_from_V(const std::array<Expr, 8>& V);
InvariantReport invariants(const AdaptedCoframe& cf);
InvariantReport invariants(const MASystem& s);

// g = diag(a; A; B) with a = det A = det B, or the swap J.
struct GaugeElement {
  bool swap = false;
  Expr a{1};
  Mat2 A{{{Expr(1), Expr(0)}, {Expr(0), Expr(1)}}};
  Mat2 B{{{Expr(1), Expr(0)}, {Expr(0), Expr(1)}}};
};
Mat gauge_matrix(const GaugeElement& g);
// New coframe u.g = g^{-1} w, re-verified 1-adapted.
BasisPtr gauge_transform(const BasisPtr& omega, const GaugeElement& g);

struct SigmaTensors {
  // symmetric tensor over the w basis: (i,j) with i<=j -> coefficient of w^i w^j
  std::map<std::pair<int, int>, Expr> sigma1;
  Form sigma2;
};
SigmaTensors sigma_tensors(const BasisPtr& omega, const std::array<Expr, 8>& V);

}  // namespace mae
