#pragma once

#include <iosfwd>

namespace mae {

// Exit codes: 0 computed/pass, 1 check failed, 2 input error, 3 capability error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mae
