#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simconj {

// Executes one command line (program name excluded) and writes the report to
// out. Returns the process exit code: 0 success or witness found, 1 no
// witness or failed verification, 2 usage error, 3 budget exceeded.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace simconj
