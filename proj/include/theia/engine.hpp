#pragma once

// Runs the two analyses over a ModelSpec and merges their reports: the
// call-strings pass (layer-sequence rules) followed by the
// parameter-sensitive pass (hyper-parameter rules).

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "theia/findings.hpp"
#include "theia/model_spec.hpp"

namespace theia {

enum class RuleSetting { error, warning, off };

enum class Profile {
  standard,    // every rule at its default severity
  minimal,     // MNL off
  strict_llm,  // multiclass accepts categorical_crossentropy only
};

std::string_view to_string(RuleSetting s);
std::string_view to_string(Profile p);
std::optional<RuleSetting> parse_rule_setting(std::string_view s);
std::optional<Profile> parse_profile(std::string_view s);

struct AnalysisConfig {
  std::map<RuleId, RuleSetting> severity_overrides;
  Severity fail_on = Severity::error;
  bool lenient_parsing = false;
  bool strict_llm = false;

  static AnalysisConfig for_profile(Profile profile);
  bool enabled(RuleId id) const;
};

// Bookkeeping of the call-strings walk.
struct CallStringState {
  int conv_count = 0;
  int conv2d_count = 0;
  int dense_count = 0;
  int consecutive_conv_run = 0;
  int activation_count_since_anchor = 0;
  int dropout_count_since_anchor = 0;
  std::optional<std::size_t> anchor_index;
  // Whether the layer directly after the anchor is batch normalization.
  bool anchor_followed_by_batch_norm = false;
};

struct PassResult {
  std::vector<Finding> findings;
  std::vector<SkipNote> skip_notes;
};

// Single left-to-right walk: CNL, IDS, MRD, MNL, ICL, IFL.
PassResult run_call_strings_pass(const ModelSpec& spec, const AnalysisConfig& config);

// INF, INN, IDN, LLM, LOB, IBS.
PassResult run_parameter_pass(const ModelSpec& spec, const AnalysisConfig& config);

// Call-strings findings first, then parameter findings; each pass sorted by
// layer (layer-less findings last) then rule. Verdict follows the final
// severities.
Report analyze(const ModelSpec& spec, const AnalysisConfig& config = {});

// Applies overrides to a rule's raw outcome: drops everything for rules
// turned off, rewrites severities otherwise.
void apply_config(RuleId id, const AnalysisConfig& config, std::vector<Finding>& findings,
                  std::vector<SkipNote>& notes);

// Stable sort by (layer index, rule id), layer-less findings last.
void sort_pass(std::vector<Finding>& findings);

}  // namespace theia
