#pragma once

// The `skomap` command line, callable in-process.
//
// Exit codes: 0 success, 1 suite or condition failure, 2 usage or parse
// error, 3 domain violation in the inputs (for example l > r).

#include <iosfwd>
#include <string>
#include <vector>

namespace skomap {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2, exit_domain = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skomap
