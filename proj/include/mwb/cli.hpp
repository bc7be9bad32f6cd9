#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mwb {

struct CliEnvironment {
    /// Store used when --store is absent (the binary reads MWB_STORE).
    std::optional<std::string> default_store;
};

/// Runs the command line `args` (without the program name).
/// Exit codes: 0 success, 1 usage or operational error, 2 Error-severity
/// conformance issues or a rejected save.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& environment = {});

}  // namespace mwb
