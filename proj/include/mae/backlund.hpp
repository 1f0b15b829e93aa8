#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mae/ma.hpp"

namespace mae {

// One factor M_i of N: its chart coordinates and their images as functions on N.
struct Factor {
  std::vector<int> coords;
  std::vector<Expr> image;
};

struct BacklundCandidate {
  BasisPtr basis;  // chart or abstract frame of N
  Form theta, theta_bar;
  Form Omega, Omega_bar;
  bool has_Omega = false;
  std::optional<Factor> pi1, pi2;  // chart candidates only
};

// Pull a chart form on one factor back to N along the factor's image.
Form pullback(const Form& a, const Factor& f, const BasisPtr& N);
// Candidate from two Monge-Ampere systems and their factor maps.
BacklundCandidate candidate_from_systems(const BasisPtr& N, const MASystem& s1, const Factor& f1,
                                         const MASystem& s2, const Factor& f2);

struct MuEpsilon {
  Expr a, b, c;  // (dtheta_bar + l dtheta)^2 = (a l^2 + b l + c) top, mod theta, theta_bar
  Expr K;        // r + 1/r with r = l1/l2
  double ratio = 0;  // r, |r| >= 1, equals eps mu^4
  std::optional<mpq_class> exact_ratio;
  double mu = 0;
  int epsilon = 0;
  bool special = false;
};
struct DegeneratePencil : InputError {
  using InputError::InputError;
};
MuEpsilon mu_epsilon(const BacklundCandidate& c);

struct Rank1Report {
  bool has_projections = false;
  int rank1 = -1, rank2 = -1, rank_joint = -1;  // generic Jacobian ranks
  int numeric_ok = 0, numeric_samples = 0;
  bool cond1 = false;
  int rank_dtheta = -1, rank_Omega = -1, rank_all = -1;
  bool cond2 = false;
  bool contact1 = false, contact2 = false;
  bool pass = false;
  std::vector<std::string> notes;
};
Rank1Report check_rank1(const BacklundCandidate& c, uint64_t seed = 0, int samples = 32);

struct LiftingData {
  std::array<Expr, 4> V, W;
  Expr mu{1};
  int epsilon = -1;
  std::optional<Expr> s2t4;
  bool numeric = false;  // values came from floating input: zero test with tolerance
};
void validate(const LiftingData& l);  // InputError on mu < 1, eps != +-1, eps mu^2 == 1

enum class SpecialType { I, IIa, IIb, III, NotSpecial, Inconsistent };
std::string to_string(SpecialType t);

struct ObstructionReport {
  std::array<Expr, 4> Phi;
  bool phi_vanish = false;
  bool rel51 = false;
  std::optional<bool> rel52;  // unset when s2 t4 is not supplied
  SpecialType type = SpecialType::NotSpecial;
  std::vector<std::string> notes;
};
ObstructionReport el_obstructions(const LiftingData& l);

struct SolitonSeed {
  std::function<double(double, double)> u, ux, uy;
  static SolitonSeed zero();
};
struct SolitonGrid {
  int nx = 0, ny = 0;
  double hx = 0, hy = 0;
  std::vector<double> v;  // row-major, v[j*nx + i] at (i*hx, j*hy)
  double compat = 0;      // max |v - v'| with v' from the other integration order
  double pde = 0;         // max |v_xy - sin(2v)/2| at interior points
  double at(int i, int j) const { return v[size_t(j) * nx + i]; }
};
// v_x = u_x - l sin(u+v) along y = 0, then v_y = -u_y + sin(u-v)/l up each column.
SolitonGrid soliton_propagate(const SolitonSeed& u, double lambda, double v0, int nx, int ny, double hx, double hy);
// 2 arctan(C exp(-l x - y/l)), C = tan(v0/2): the u = 0 solution.
double soliton_closed_form(double lambda, double v0, double x, double y);

}  // namespace mae
