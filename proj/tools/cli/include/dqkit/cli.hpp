#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dqkit::cli {

enum ExitStatus : int {
    kSuccess = 0,
    kDomainError = 1,  // invalid model or data
    kUsageError = 2,   // bad flags, unparsable input files or specs
};

/// Runs one `dqkit` invocation. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dqkit::cli
