#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jcv::cli {

/// Runs one command line (args[0] is the program name). Returns the process
/// exit code: 0 success, 1 usage or configuration error, 2 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jcv::cli
