#include "theia/rules.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <utility>

namespace theia::rules {

namespace {

using enum DatasetField;

const std::array<RuleDescriptor, 12>& descriptor_table() {
  static const std::array<RuleDescriptor, 12> table{{
      {RuleId::CNL, "Choice of Non-Linearity", Technique::call_strings,
       {"number of classes", "type of problem"}, {problem_type}, Severity::error},
      {RuleId::INF, "Inaccurate Number of Filters", Technique::parameter_sensitive,
       {"type of images"}, {input_type}, Severity::error},
      {RuleId::INN, "Incorrect Number of Neurons", Technique::parameter_sensitive,
       {"type of images", "type of problem"}, {input_shape}, Severity::error},
      {RuleId::IDS, "Insufficient Downsampling", Technique::call_strings,
       {"any type of data or problem"}, {}, Severity::error},
      {RuleId::MRD, "Missing or Redundant Dropout", Technique::call_strings,
       {"any type of data or problem"}, {}, Severity::warning},
      {RuleId::MNL, "Missing Normalization Layer", Technique::call_strings,
       {"any type of data or problem"}, {}, Severity::warning},
      {RuleId::ICL, "Inappropriate Number of Convolution Layers", Technique::call_strings,
       {"type of images"}, {input_type}, Severity::error},
      {RuleId::IFL, "Improper Number of Fully Connected Layers", Technique::call_strings,
       {"type of images"}, {input_type}, Severity::warning},
      {RuleId::IDN, "Input Data not Normalized", Technique::parameter_sensitive,
       {"any type of data or problem"}, {value_range}, Severity::error},
      {RuleId::LLM, "Labels, Output Layer Activation, and Loss Mismatch", Technique::parameter_sensitive,
       {"number of classes", "type of problem"}, {problem_type}, Severity::error},
      {RuleId::LOB, "Learning Rate Out-of-Bound", Technique::parameter_sensitive,
       {"any type of data or problem"}, {}, Severity::error},
      {RuleId::IBS, "Inadequate Batch Size", Technique::parameter_sensitive,
       {"size of training set"}, {}, Severity::warning},
  }};
  return table;
}

// Shortest round-trippable decimal for messages ("0.1", "255", "1e-05").
std::string num(double v) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

Finding make(RuleId id, std::optional<LayerRef> where, std::string message, std::string fix) {
  Finding f;
  f.rule_id = id;
  f.severity = descriptor(id).default_severity;
  if (where) {
    f.layer_index = where->index;
    f.source_location = where->source_location;
  }
  f.message = std::move(message);
  f.fix_suggestion = std::move(fix);
  return f;
}

RuleOutcome single(Finding f) { return {{std::move(f)}, {}}; }
RuleOutcome skip(RuleId id, std::string reason) { return {{}, {{id, std::move(reason)}}}; }

ActivationKind expected_activation(ProblemType p) {
  switch (p) {
    case ProblemType::binary_classification:
    case ProblemType::multilabel_classification:
      return ActivationKind::sigmoid;
    case ProblemType::multiclass_classification:
      return ActivationKind::softmax;
    case ProblemType::regression:
      return ActivationKind::linear;
  }
  return ActivationKind::linear;
}

std::string range_text(std::int64_t lo, std::int64_t hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

const RuleDescriptor& descriptor(RuleId id) {
  const auto& table = descriptor_table();
  return table[static_cast<std::size_t>(id)];
}

std::string_view to_string(Technique t) {
  return t == Technique::call_strings ? "call_strings" : "parameter_sensitive";
}

FilterBounds filter_bounds(InputType input_type) {
  if (input_type == InputType::color_images) return {16, 512};
  return {6, 256};
}

RuleOutcome check_cnl(const LayerRef& anchor, int activation_count, ProblemType problem, bool is_output_layer) {
  if (activation_count == 1) return {};
  if (activation_count > 1) {
    return single(make(RuleId::CNL, anchor,
                       std::to_string(activation_count) + " activation functions applied to the same layer",
                       "Remove redundant activation layer → Keep exactly one activation per layer"));
  }
  if (is_output_layer) {
    // A regression output is linear on purpose.
    if (problem == ProblemType::regression) return {};
    return single(make(RuleId::CNL, anchor, "output layer has no activation function",
                       "Add last layer activation function → Use " +
                           std::string(to_string(expected_activation(problem)))));
  }
  return single(make(RuleId::CNL, anchor, "hidden layer has no activation function",
                     "Add activation function in hidden layers → Use relu"));
}

RuleOutcome check_inf(InputType input_type, std::int64_t filters, const LayerRef& layer) {
  const FilterBounds b = filter_bounds(input_type);
  const std::string bounds = range_text(b.min, b.max);
  const std::string input = std::string(to_string(input_type));
  if (filters < b.min) {
    return single(make(RuleId::INF, layer,
                       std::to_string(filters) + " filters is below " + std::to_string(b.min) + " for " + input + " input",
                       "Increase convolution layer filters while going deeper → Use " + bounds + " filters"));
  }
  if (filters > b.max) {
    return single(make(RuleId::INF, layer,
                       std::to_string(filters) + " filters is above " + std::to_string(b.max) + " for " + input + " input",
                       "Reduce convolution layer filters → Use " + bounds + " filters"));
  }
  return {};
}

RuleOutcome check_inn(std::span<const DenseInput> hidden, bool has_conv) {
  RuleOutcome out;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const DenseInput& d = hidden[i];
    if (!d.input_size) {
      out.notes.push_back({RuleId::INN, "layer " + std::to_string(d.layer.index) + ": input size unknown"});
    } else if (d.units > *d.input_size) {
      out.findings.push_back(make(RuleId::INN, d.layer,
                                  std::to_string(d.units) + " units exceed the input size " + std::to_string(*d.input_size),
                                  "Reduce units in dense layer → Use at most " + std::to_string(*d.input_size) + " units"));
    }
    if (has_conv && i > 0 && d.units > hidden[i - 1].units) {
      out.findings.push_back(make(RuleId::INN, d.layer,
                                  "dense width grows from " + std::to_string(hidden[i - 1].units) + " to " +
                                      std::to_string(d.units) + " units toward the output",
                                  "Decrease units progressively toward the output layer → Use at most " +
                                      std::to_string(hidden[i - 1].units) + " units"));
    }
  }
  return out;
}

RuleOutcome check_ids(const LayerRef& conv, int run_length) {
  if (run_length <= kMaxConsecutiveConv) return {};
  return single(make(RuleId::IDS, conv,
                     std::to_string(run_length) + " consecutive convolution layers without a pooling layer",
                     "Add pooling layer → Downsample after at most " + std::to_string(kMaxConsecutiveConv) +
                         " consecutive convolution layers"));
}

RuleOutcome check_mrd(const LayerRef& anchor, int dropout_count, bool had_activation, bool is_output_layer) {
  if (dropout_count > 1) {
    return single(make(RuleId::MRD, anchor,
                       std::to_string(dropout_count) + " dropout layers applied to the same layer",
                       "Remove redundant dropout layer → Keep one Dropout per layer"));
  }
  if (dropout_count == 0 && had_activation && !is_output_layer) {
    return single(make(RuleId::MRD, anchor, "activation is not followed by dropout",
                       "Add dropout layers after hidden layers → Insert Dropout after the activation"));
  }
  return {};
}

RuleOutcome check_mnl(const LayerRef& anchor, bool next_is_batch_norm, bool inline_nonlinearity,
                      bool is_output_layer) {
  if (is_output_layer) return {};
  if (inline_nonlinearity) {
    return single(make(RuleId::MNL, anchor, "activation applied inline, leaving no room for batch normalization",
                       "Add Batch Normalization → Move the activation to a separate layer after BatchNormalization"));
  }
  if (!next_is_batch_norm) {
    return single(make(RuleId::MNL, anchor, "layer is not followed by batch normalization",
                       "Add Batch Normalization → Insert BatchNormalization before the activation"));
  }
  return {};
}

RuleOutcome check_icl(InputType input_type, int conv2d_count, int conv_count, const LayerRef& last_conv) {
  if (conv_count == 0 || input_type == InputType::tabular) return {};
  const int minimum = input_type == InputType::color_images ? 3 : 2;
  if (conv2d_count >= minimum) return {};
  return single(make(RuleId::ICL, last_conv,
                     std::to_string(conv2d_count) + " conv2d layers is too shallow for " +
                         std::string(to_string(input_type)) + " input (minimum " + std::to_string(minimum) + ")",
                     "Increase network depth → Use at least " + std::to_string(minimum) + " convolution layers"));
}

RuleOutcome check_ifl(InputType input_type, int dense_count, int conv_count, const LayerRef& first_excess_dense) {
  if (conv_count == 0 || input_type == InputType::tabular) return {};
  if (dense_count <= kMaxDenseLayersInCnn) return {};
  return single(make(RuleId::IFL, first_excess_dense,
                     std::to_string(dense_count) + " fully connected layers in a CNN (maximum " +
                         std::to_string(kMaxDenseLayersInCnn) + ")",
                     "Reduce the number of fully connected layers → Use at most " +
                         std::to_string(kMaxDenseLayersInCnn) + " dense layers"));
}

RuleOutcome check_idn(const std::optional<ValueRange>& value_range) {
  if (!value_range) return skip(RuleId::IDN, "value_range not specified");
  const auto within = [&](double lo, double hi) { return value_range->min >= lo && value_range->max <= hi; };
  if (within(0.0, 1.0) || within(-1.0, 1.0)) return {};
  return single(make(RuleId::IDN, std::nullopt,
                     "input values span [" + num(value_range->min) + ", " + num(value_range->max) +
                         "], outside [0, 1] and [-1, 1]",
                     "Normalize the data → Scale inputs into [0, 1] or [-1, 1]"));
}

RuleOutcome check_llm(ProblemType problem, const std::optional<OutputActivation>& output,
                      const std::optional<Loss>& loss, const LlmOptions& options) {
  if (problem == ProblemType::multilabel_classification) {
    return skip(RuleId::LLM, "no output activation/loss mapping for multilabel_classification");
  }
  RuleOutcome out;
  const std::string problem_name(to_string(problem));
  const ActivationKind want = expected_activation(problem);

  if (!output) {
    out.notes.push_back({RuleId::LLM, "model has no dense output layer"});
  } else if (!output->activation.is(want)) {
    const std::string have = name_of(output->activation);
    const std::string fix = problem == ProblemType::regression
                                ? "Remove last " + have + " activation layer → Use linear output"
                                : "Change last layer activation function → Use " + std::string(to_string(want));
    out.findings.push_back(make(RuleId::LLM, output->source,
                                "output activation " + have + " does not match " + problem_name + " (expected " +
                                    std::string(to_string(want)) + ")",
                                fix));
  }

  if (!loss) {
    out.notes.push_back({RuleId::LLM, "loss not specified"});
    return out;
  }
  bool ok = false;
  std::string expected;
  switch (problem) {
    case ProblemType::binary_classification:
      ok = loss->is(LossKind::binary_crossentropy);
      expected = "binary_crossentropy";
      break;
    case ProblemType::multiclass_classification:
      ok = loss->is(LossKind::categorical_crossentropy) ||
           (!options.strict && loss->is(LossKind::sparse_categorical_crossentropy));
      expected = "categorical_crossentropy";
      break;
    case ProblemType::regression:
      ok = loss->is(LossKind::mse) || loss->is(LossKind::mae);
      expected = "mse";
      break;
    case ProblemType::multilabel_classification:
      break;
  }
  if (!ok) {
    out.findings.push_back(make(RuleId::LLM, std::nullopt,
                                "loss " + name_of(*loss) + " does not match " + problem_name + " (expected " +
                                    expected + ")",
                                "Change loss function → Use " + expected));
  }
  return out;
}

RuleOutcome check_lob(const std::optional<double>& learning_rate) {
  if (!learning_rate) return skip(RuleId::LOB, "learning_rate not specified");
  const std::string range = "[" + num(kMinLearningRate) + ", " + num(kMaxLearningRate) + "]";
  if (*learning_rate > kMaxLearningRate) {
    return single(make(RuleId::LOB, std::nullopt,
                       "learning rate " + num(*learning_rate) + " is above " + num(kMaxLearningRate),
                       "Reduce the learning rate → Use a value in " + range));
  }
  if (*learning_rate < kMinLearningRate) {
    return single(make(RuleId::LOB, std::nullopt,
                       "learning rate " + num(*learning_rate) + " is below " + num(kMinLearningRate),
                       "Increase the learning rate → Use a value in " + range));
  }
  return {};
}

RuleOutcome check_ibs(const std::optional<std::int64_t>& batch_size) {
  if (!batch_size) return skip(RuleId::IBS, "batch_size not specified");
  const std::string range = range_text(kMinBatchSize, kMaxBatchSize);
  if (*batch_size < kMinBatchSize) {
    return single(make(RuleId::IBS, std::nullopt,
                       "batch size " + std::to_string(*batch_size) + " is below " + std::to_string(kMinBatchSize),
                       "Increase the batch size → Use a value in " + range));
  }
  if (*batch_size > kMaxBatchSize) {
    return single(make(RuleId::IBS, std::nullopt,
                       "batch size " + std::to_string(*batch_size) + " is above " + std::to_string(kMaxBatchSize),
                       "Reduce the batch size → Use a value in " + range));
  }
  return {};
}

}  // namespace theia::rules
