#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace theia::cli {

// Entry point of `theia-lint`. args[0] is the program name. Reports go to
// `out`, diagnostics to `err`. env_profile stands in for THEIA_LINT_PROFILE.
// Returns 0 (pass), 1 (findings at or above --fail-on) or 2 (usage, I/O or
// document error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_profile);

}  // namespace theia::cli
