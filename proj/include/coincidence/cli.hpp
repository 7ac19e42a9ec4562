#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coincidence {

/// Runs the command line (without the program name). Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace coincidence
