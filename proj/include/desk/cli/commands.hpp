#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "desk/cli/report.hpp"

namespace desk {

// The desk command line: `desk <trees|code|sb|verify-all> ...`. args excludes
// the program name. The report goes to --out or to out; diagnostics to err.
// Exit status: 0 all checks fine, 1 some check failed, 2 bad usage or input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace desk
