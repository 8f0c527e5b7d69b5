#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ws {

/// Command dispatch. Exit codes: 0 verdict computed, 1 usage/parse error,
/// 2 undecided / not certifiable, 3 internal invariant failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ws
