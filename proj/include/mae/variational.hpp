#pragma once

#include <map>
#include <string>

#include "mae/ma.hpp"

namespace mae {

// Express a form on the adapted coframe (or on eta) in chart coordinates, and back.
Form to_chart(const Form& a);
Form to_coframe(const Form& a, const BasisPtr& omega);

// phi_0 of dw^0 = -phi_0^w^0 + w^1^w^2 + w^3^w^4, on the chart; the w^0 component
// is fixed by closedness. Throws NotEulerLagrange when S_2 != 0.
Form phi0(const AdaptedCoframe& cf);

// lambda with d(lambda) = 2 lambda phi0, rationalized from exp(2 potential) and
// scaled to 1 at the first base point where it is finite and nonzero.
Expr integrating_factor(const Form& phi0, const std::map<std::string, mpq_class>& base = {});

// lambda w^0^(w^1^w^2 - w^3^w^4) on the chart; NotClosed if d != 0.
Form poincare_cartan(const AdaptedCoframe& cf, const Expr& lambda);
Form lagrangian(const Form& Pi);

struct LagrangianPackage {
  Form phi0;
  Expr lambda;
  Form Pi, Lambda;
  bool have_Lambda = false;   // false when the primitive step hit NotIntegrable
  std::string Lambda_error;  // message of that failure
  std::map<std::string, Form> residuals;  // every coefficient must normalize to 0
};
LagrangianPackage lagrangian_package(const AdaptedCoframe& cf);

}  // namespace mae
