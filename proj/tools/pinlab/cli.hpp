#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pinlab {

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pinlab
