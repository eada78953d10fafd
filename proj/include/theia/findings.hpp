#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "theia/model_spec.hpp"

namespace theia {

// Declaration order is the tie-break order inside a pass.
enum class RuleId { CNL, INF, INN, IDS, MRD, MNL, ICL, IFL, IDN, LLM, LOB, IBS };

inline constexpr std::array<RuleId, 12> kAllRules{
    RuleId::CNL, RuleId::INF, RuleId::INN, RuleId::IDS, RuleId::MRD, RuleId::MNL,
    RuleId::ICL, RuleId::IFL, RuleId::IDN, RuleId::LLM, RuleId::LOB, RuleId::IBS,
};

// Ordered by strictness: warning < error.
enum class Severity { warning, error };

enum class Verdict { clean, warnings, errors };

std::string_view to_string(RuleId id);
std::string_view to_string(Severity s);
std::string_view to_string(Verdict v);
std::optional<RuleId> parse_rule_id(std::string_view s);
std::optional<Severity> parse_severity(std::string_view s);
std::optional<Verdict> parse_verdict(std::string_view s);

struct Finding {
  RuleId rule_id = RuleId::CNL;
  Severity severity = Severity::error;
  // Absent for findings about the dataset or learner settings.
  std::optional<std::size_t> layer_index;
  std::optional<SourceLocation> source_location;
  std::string message;
  std::string fix_suggestion;

  bool operator==(const Finding&) const = default;
};

// A rule that could not reach a verdict because an input was missing.
struct SkipNote {
  RuleId rule_id = RuleId::CNL;
  std::string reason;
  bool operator==(const SkipNote&) const = default;
};

struct Report {
  std::vector<Finding> findings;
  std::vector<SkipNote> skip_notes;
  Verdict verdict = Verdict::clean;
  std::string spec_fingerprint;

  bool operator==(const Report&) const = default;
};

Verdict verdict_of(const std::vector<Finding>& findings);

}  // namespace theia
