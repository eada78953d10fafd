#include "theia/engine.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "theia/rules.hpp"
#include "theia/shape_inference.hpp"

namespace theia {

namespace {

using rules::LayerRef;
using rules::RuleOutcome;

void collect(RuleId id, RuleOutcome outcome, const AnalysisConfig& config, PassResult& into) {
  apply_config(id, config, outcome.findings, outcome.notes);
  for (auto& f : outcome.findings) into.findings.push_back(std::move(f));
  for (auto& n : outcome.notes) into.skip_notes.push_back(std::move(n));
}

class CallStringWalk {
 public:
  CallStringWalk(const ModelSpec& spec, const AnalysisConfig& config)
      : spec_(spec), config_(config), output_(output_layer_index(spec)) {}

  PassResult run() {
    const auto& layers = spec_.layers;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const LayerSpec& layer = layers[i];
      if (state_.anchor_index && *state_.anchor_index + 1 == i) {
        state_.anchor_followed_by_batch_norm = layer.kind.is(LayerKind::batch_normalization);
      }
      if (layer.is_anchor()) {
        close_anchor();
        open_anchor(layer);
      } else if (layer.is_pooling()) {
        close_anchor();
        state_.consecutive_conv_run = 0;
      } else if (layer.kind.is(LayerKind::activation)) {
        if (state_.anchor_index && !layer.activation_name->is(ActivationKind::linear)) {
          ++state_.activation_count_since_anchor;
        }
      } else if (layer.kind.is(LayerKind::dropout)) {
        if (state_.anchor_index) ++state_.dropout_count_since_anchor;
      }
    }
    close_anchor();

    if (last_conv_) {
      collect(RuleId::ICL,
              rules::check_icl(spec_.dataset.input_type, state_.conv2d_count, state_.conv_count, *last_conv_),
              config_, result_);
    }
    if (fourth_dense_) {
      collect(RuleId::IFL,
              rules::check_ifl(spec_.dataset.input_type, state_.dense_count, state_.conv_count, *fourth_dense_),
              config_, result_);
    }
    sort_pass(result_.findings);
    return std::move(result_);
  }

 private:
  void open_anchor(const LayerSpec& layer) {
    state_.anchor_index = layer.index;
    state_.activation_count_since_anchor = layer.has_inline_nonlinearity() ? 1 : 0;
    state_.dropout_count_since_anchor = 0;
    state_.anchor_followed_by_batch_norm = false;

    if (layer.is_conv()) {
      ++state_.conv_count;
      if (layer.kind.is(LayerKind::conv2d)) ++state_.conv2d_count;
      ++state_.consecutive_conv_run;
      last_conv_ = LayerRef::of(layer);
      if (state_.consecutive_conv_run == rules::kMaxConsecutiveConv + 1) {
        collect(RuleId::IDS, rules::check_ids(LayerRef::of(layer), state_.consecutive_conv_run), config_, result_);
      }
    } else {
      ++state_.dense_count;
      if (state_.dense_count == rules::kMaxDenseLayersInCnn + 1) fourth_dense_ = LayerRef::of(layer);
    }
  }

  // Adjudicates the open anchor once its window (up to the next anchor,
  // pooling layer or end of model) is complete.
  void close_anchor() {
    if (!state_.anchor_index) return;
    const LayerSpec& anchor = spec_.layers[*state_.anchor_index];
    const LayerRef ref = LayerRef::of(anchor);
    const bool is_output = output_ && *output_ == anchor.index;
    const int activations = state_.activation_count_since_anchor;

    collect(RuleId::CNL, rules::check_cnl(ref, activations, spec_.dataset.problem_type, is_output), config_, result_);
    collect(RuleId::MRD, rules::check_mrd(ref, state_.dropout_count_since_anchor, activations > 0, is_output),
            config_, result_);
    collect(RuleId::MNL,
            rules::check_mnl(ref, state_.anchor_followed_by_batch_norm, anchor.has_inline_nonlinearity(), is_output),
            config_, result_);
    state_.anchor_index.reset();
  }

  const ModelSpec& spec_;
  const AnalysisConfig& config_;
  std::optional<std::size_t> output_;
  CallStringState state_;
  std::optional<LayerRef> last_conv_;
  std::optional<LayerRef> fourth_dense_;
  PassResult result_;
};

}  // namespace

std::string_view to_string(RuleSetting s) {
  switch (s) {
    case RuleSetting::error: return "error";
    case RuleSetting::warning: return "warning";
    case RuleSetting::off: return "off";
  }
  return "off";
}

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::standard: return "default";
    case Profile::minimal: return "minimal";
    case Profile::strict_llm: return "strict-llm";
  }
  return "default";
}

std::optional<RuleSetting> parse_rule_setting(std::string_view s) {
  for (auto v : {RuleSetting::error, RuleSetting::warning, RuleSetting::off}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Profile> parse_profile(std::string_view s) {
  for (auto v : {Profile::standard, Profile::minimal, Profile::strict_llm}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

AnalysisConfig AnalysisConfig::for_profile(Profile profile) {
  AnalysisConfig config;
  if (profile == Profile::minimal) config.severity_overrides[RuleId::MNL] = RuleSetting::off;
  if (profile == Profile::strict_llm) config.strict_llm = true;
  return config;
}

bool AnalysisConfig::enabled(RuleId id) const {
  auto it = severity_overrides.find(id);
  return it == severity_overrides.end() || it->second != RuleSetting::off;
}

void apply_config(RuleId id, const AnalysisConfig& config, std::vector<Finding>& findings,
                  std::vector<SkipNote>& notes) {
  auto it = config.severity_overrides.find(id);
  if (it == config.severity_overrides.end()) return;
  if (it->second == RuleSetting::off) {
    findings.clear();
    notes.clear();
    return;
  }
  const Severity s = it->second == RuleSetting::error ? Severity::error : Severity::warning;
  for (auto& f : findings) f.severity = s;
}

void sort_pass(std::vector<Finding>& findings) {
  static constexpr auto kNoLayer = std::numeric_limits<std::size_t>::max();
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    const auto la = a.layer_index.value_or(kNoLayer);
    const auto lb = b.layer_index.value_or(kNoLayer);
    if (la != lb) return la < lb;
    return a.rule_id < b.rule_id;
  });
}

PassResult run_call_strings_pass(const ModelSpec& spec, const AnalysisConfig& config) {
  return CallStringWalk(spec, config).run();
}

PassResult run_parameter_pass(const ModelSpec& spec, const AnalysisConfig& config) {
  PassResult result;
  const DatasetProfile& data = spec.dataset;
  const auto output = output_layer_index(spec);
  const auto shapes = infer_shapes(spec);

  bool has_conv = false;
  std::vector<rules::DenseInput> hidden_dense;
  for (const LayerSpec& layer : spec.layers) {
    if (layer.is_conv()) {
      has_conv = true;
      collect(RuleId::INF, rules::check_inf(data.input_type, *layer.filters, LayerRef::of(layer)), config, result);
    } else if (layer.is_dense() && layer.index != output) {
      rules::DenseInput d{LayerRef::of(layer), *layer.units, std::nullopt};
      if (auto in = input_shape_of(spec, shapes, layer.index); in && !in->empty()) d.input_size = in->back();
      hidden_dense.push_back(std::move(d));
    }
  }
  collect(RuleId::INN, rules::check_inn(hidden_dense, has_conv), config, result);
  collect(RuleId::IDN, rules::check_idn(data.value_range), config, result);

  std::optional<rules::OutputActivation> out_act;
  if (auto eff = effective_output_activation(spec)) {
    out_act = rules::OutputActivation{eff->activation, LayerRef::of(spec.layers[eff->source_index])};
  }
  collect(RuleId::LLM, rules::check_llm(data.problem_type, out_act, spec.learner.loss, {config.strict_llm}), config,
          result);
  collect(RuleId::LOB, rules::check_lob(spec.learner.learning_rate), config, result);
  collect(RuleId::IBS, rules::check_ibs(spec.learner.batch_size), config, result);

  sort_pass(result.findings);
  return result;
}

Report analyze(const ModelSpec& spec, const AnalysisConfig& config) {
  Report report;
  PassResult first = run_call_strings_pass(spec, config);
  PassResult second = run_parameter_pass(spec, config);
  report.findings = std::move(first.findings);
  report.findings.insert(report.findings.end(), std::make_move_iterator(second.findings.begin()),
                         std::make_move_iterator(second.findings.end()));
  report.skip_notes = std::move(first.skip_notes);
  report.skip_notes.insert(report.skip_notes.end(), std::make_move_iterator(second.skip_notes.begin()),
                           std::make_move_iterator(second.skip_notes.end()));
  report.verdict = verdict_of(report.findings);
  report.spec_fingerprint = spec_fingerprint(spec);
  return report;
}

}  // namespace theia
