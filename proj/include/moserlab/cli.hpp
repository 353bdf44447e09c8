#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moserlab::cli {

/// Exit codes: 0 all assertions passed, 1 an assertion failed (failing labels on err),
/// 2 malformed command line, config or out-of-domain input.
enum Exit : int { ok = 0, assertion_failed = 1, config_error = 2 };

/// args excludes the program name. Reports go to --out when given, otherwise to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moserlab::cli
