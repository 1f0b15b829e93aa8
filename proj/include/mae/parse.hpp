#pragma once

#include <string>

#include "mae/expr.hpp"

namespace mae {

struct ParseError : InputError {
  ParseError(const std::string& msg, size_t offset)
      : InputError(msg + " at offset " + std::to_string(offset)), offset(offset) {}
  size_t offset;
};

// Identifiers must already be registered in ctx (coordinates, parameters,
// roots). f(x) resolves to a registered application; sin/cos of an atom are
// built in. Integer literals only; rationals via '/'.
Expr parse_expr(const std::string& s, const ContextPtr& ctx);

}  // namespace mae
