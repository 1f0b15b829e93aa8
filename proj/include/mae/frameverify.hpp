#pragma once

#include <map>
#include <string>
#include <vector>

#include "mae/ma.hpp"

namespace mae {

struct FrameCheckReport {
  std::vector<std::pair<std::string, Form>> residuals;  // d^2 of each symbol and aux scalar
  bool pass = true;
  double seconds = 0;
};

FrameCheckReport check_involutive(const BasisPtr& b);

// True iff every coefficient of d(f) is divisible by f.
bool check_invariant_locus(const BasisPtr& b, const Expr& f);

// Eliminate aux scalars by substitution; each eliminated scalar's declared
// differential must equal d of its replacement (InputError otherwise).
BasisPtr restrict_locus(const BasisPtr& b, const std::map<int, Expr>& subs);

// New coframe whose first five symbols are the given 1-forms on b, completed by
// the first basis symbol of b that keeps it invertible.
BasisPtr complete_coframe(const BasisPtr& b, const std::vector<Form>& five, const std::vector<std::string>& names);

// dw^0 - w^1^w^2 - w^3^w^4 modulo w^0 and the completing direction(s).
Form adaptation_residual_mod(const BasisPtr& c);

struct NotAdapted : InputError {
  using InputError::InputError;
};
InvariantReport abstract_invariants(const BasisPtr& b, const std::vector<Form>& five);

bool check_exact(const Form& a);

}  // namespace mae
