#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fwipm {

/// Entry point behind the `fwipm` executable. `args` excludes the program
/// name. Returns the process exit code: 0 success, 1 input or usage error,
/// 2 iteration limit reached, 3 degenerate or unbounded problem; verify
/// returns 0 iff every check passed.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace fwipm
