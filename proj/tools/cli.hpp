#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnsseckit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kDomainError = 1,
    kUsageError = 2,
    kTransportError = 3,
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; the return value is the process exit status.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace dnsseckit::cli
