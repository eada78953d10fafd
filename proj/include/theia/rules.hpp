#pragma once

// The twelve structural checks. Each check is a pure function of the inputs
// the engine extracts for it and returns findings (at the rule's default
// severity) and skip notes. None of them throw.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "theia/findings.hpp"
#include "theia/model_spec.hpp"

namespace theia::rules {

enum class Technique { call_strings, parameter_sensitive };

// DatasetProfile fields a rule may read. A rule's verdict must not change
// when any other dataset field changes.
enum class DatasetField { input_type, problem_type, num_classes, input_shape, value_range, training_set_size };

struct RuleDescriptor {
  RuleId rule_id;
  std::string_view title;
  Technique technique;
  // Dataset characteristics the bug class is fixed with, as catalogued for
  // the rule. Informational.
  std::vector<std::string_view> dataset_characteristics;
  std::vector<DatasetField> dataset_fields;
  Severity default_severity;
};

const RuleDescriptor& descriptor(RuleId id);
std::string_view to_string(Technique t);

struct RuleOutcome {
  std::vector<Finding> findings;
  std::vector<SkipNote> notes;
};

// Position of a layer for localization.
struct LayerRef {
  std::size_t index = 0;
  std::optional<SourceLocation> source_location;

  static LayerRef of(const LayerSpec& layer) { return {layer.index, layer.source_location}; }
};

// Lower and upper filter bounds (inclusive of the bounds) per input type.
struct FilterBounds {
  std::int64_t min;
  std::int64_t max;
};
FilterBounds filter_bounds(InputType input_type);

inline constexpr double kMinLearningRate = 0.0001;
inline constexpr double kMaxLearningRate = 0.01;
inline constexpr std::int64_t kMinBatchSize = 32;
inline constexpr std::int64_t kMaxBatchSize = 256;
inline constexpr int kMaxConsecutiveConv = 4;
inline constexpr int kMaxDenseLayersInCnn = 3;

// activation_count counts non-linear activations applied to the anchor before
// the next anchor or pooling layer.
RuleOutcome check_cnl(const LayerRef& anchor, int activation_count, ProblemType problem, bool is_output_layer);

RuleOutcome check_inf(InputType input_type, std::int64_t filters, const LayerRef& layer);

struct DenseInput {
  LayerRef layer;
  std::int64_t units = 0;
  // Width of the tensor entering the layer; nullopt when shapes are unknown.
  std::optional<std::int64_t> input_size;
};

// `hidden` lists hidden dense layers (the output layer excluded) in model
// order. The monotone-width clause only applies when has_conv is set.
RuleOutcome check_inn(std::span<const DenseInput> hidden, bool has_conv);

// Called with the length of the current pooling-free conv run. Fires only
// once the run exceeds the limit.
RuleOutcome check_ids(const LayerRef& conv, int run_length);

RuleOutcome check_mrd(const LayerRef& anchor, int dropout_count, bool had_activation, bool is_output_layer);

// next_is_batch_norm: the layer right after the anchor is batch
// normalization. inline_nonlinearity: the anchor applies its activation
// itself, leaving no room for normalization in between.
RuleOutcome check_mnl(const LayerRef& anchor, bool next_is_batch_norm, bool inline_nonlinearity,
                      bool is_output_layer);

// conv_count covers conv1d and conv2d and scopes the rule to CNNs;
// conv2d_count is the quantity compared against the threshold.
RuleOutcome check_icl(InputType input_type, int conv2d_count, int conv_count, const LayerRef& last_conv);

RuleOutcome check_ifl(InputType input_type, int dense_count, int conv_count, const LayerRef& first_excess_dense);

RuleOutcome check_idn(const std::optional<ValueRange>& value_range);

struct OutputActivation {
  Activation activation;
  LayerRef source;
};

struct LlmOptions {
  // Accept only categorical_crossentropy for multiclass problems.
  bool strict = false;
};

// output is nullopt when the model has no dense output layer.
RuleOutcome check_llm(ProblemType problem, const std::optional<OutputActivation>& output,
                      const std::optional<Loss>& loss, const LlmOptions& options = {});

RuleOutcome check_lob(const std::optional<double>& learning_rate);

RuleOutcome check_ibs(const std::optional<std::int64_t>& batch_size);

}  // namespace theia::rules
