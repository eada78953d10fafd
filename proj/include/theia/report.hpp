#pragma once

#include <string>
#include <string_view>

#include "theia/findings.hpp"

namespace theia {

inline constexpr int kReportVersion = 1;

// Exit statuses of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

// One line per finding,
//   [ERROR] CNL layer 7 (model.py:12): <message> — fix: <suggestion>
// then one line per skip note and a closing verdict line.
std::string render_text(const Report& report);

// Versioned JSON document; parse_report(render_machine(r)) == r.
std::string render_machine(const Report& report);

// Throws SchemaError on malformed input.
Report parse_report(std::string_view text);

// kExitFindings when some finding is at or above fail_on, else kExitPass.
int exit_code(const Report& report, Severity fail_on);

}  // namespace theia
