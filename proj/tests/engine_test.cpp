#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/spec_generator.hpp"
#include "support/standalone_rules.hpp"
#include "theia/engine.hpp"
#include "theia/rules.hpp"

namespace theia {
namespace {

LayerSpec layer(LayerKind k) {
  LayerSpec l;
  l.kind = {k, {}};
  return l;
}

LayerSpec dense(std::int64_t units) {
  LayerSpec l = layer(LayerKind::dense);
  l.units = units;
  return l;
}

LayerSpec conv(std::int64_t filters) {
  LayerSpec l = layer(LayerKind::conv2d);
  l.filters = filters;
  l.kernel_size = std::vector<std::int64_t>{3, 3};
  return l;
}

LayerSpec act(ActivationKind k) {
  LayerSpec l = layer(LayerKind::activation);
  l.activation_name = Activation{k, {}};
  return l;
}

ModelSpec model(std::vector<LayerSpec> layers, InputType input = InputType::tabular,
                ProblemType problem = ProblemType::binary_classification) {
  ModelSpec s;
  s.dataset.input_type = input;
  s.dataset.problem_type = problem;
  if (problem != ProblemType::regression) s.dataset.num_classes = 2;
  for (std::size_t i = 0; i < layers.size(); ++i) layers[i].index = i;
  s.layers = std::move(layers);
  return s;
}

std::size_t count(const Report& r, RuleId id) {
  return std::count_if(r.findings.begin(), r.findings.end(), [&](const Finding& f) { return f.rule_id == id; });
}

bool noted(const Report& r, RuleId id) {
  return std::any_of(r.skip_notes.begin(), r.skip_notes.end(), [&](const SkipNote& n) { return n.rule_id == id; });
}

TEST(Analyze, BuggyCnnFixture) {
  const Report r = analyze(parse_model_spec(testing::read_fixture("buggy_cnn.spec.json")));
  EXPECT_EQ(r.verdict, Verdict::errors);
  EXPECT_EQ(count(r, RuleId::ICL), 1u);
  EXPECT_EQ(count(r, RuleId::CNL), 1u);
  EXPECT_GE(count(r, RuleId::MRD), 1u);
  EXPECT_GE(count(r, RuleId::MNL), 1u);
}

TEST(Analyze, CleanFixture) {
  const Report r = analyze(parse_model_spec(testing::read_fixture("clean.spec.json")));
  EXPECT_TRUE(r.findings.empty());
  EXPECT_TRUE(r.skip_notes.empty());
  EXPECT_EQ(r.verdict, Verdict::clean);
}

TEST(Analyze, SingleDenseWithoutActivation) {
  const Report r = analyze(model({dense(8)}));
  ASSERT_EQ(count(r, RuleId::CNL), 1u);
  EXPECT_EQ(r.findings[0].rule_id, RuleId::CNL);
  EXPECT_EQ(r.findings[0].layer_index, 0u);
}

TEST(Analyze, ShallowGrayscaleCnn) {
  LayerSpec mp = layer(LayerKind::maxpooling2d);
  const Report r = analyze(model({conv(32), act(ActivationKind::relu), mp}, InputType::grayscale_images));
  EXPECT_EQ(count(r, RuleId::ICL), 1u);
}

TEST(Analyze, PoolingBreaksConvRun) {
  std::vector<LayerSpec> layers;
  for (int i = 0; i < 4; ++i) layers.push_back(conv(32));
  layers.push_back(layer(LayerKind::maxpooling2d));
  for (int i = 0; i < 4; ++i) layers.push_back(conv(32));
  EXPECT_EQ(count(analyze(model(layers, InputType::color_images)), RuleId::IDS), 0u);
  layers.insert(layers.begin(), conv(32));
  const Report r = analyze(model(layers, InputType::color_images));
  ASSERT_EQ(count(r, RuleId::IDS), 1u);
}

TEST(Analyze, ParameterExamples) {
  ModelSpec s = model({dense(8), act(ActivationKind::sigmoid)});
  s.learner.learning_rate = 0.1;
  EXPECT_EQ(count(analyze(s), RuleId::LOB), 1u);

  s.dataset.value_range = ValueRange{0, 255};
  EXPECT_EQ(count(analyze(s), RuleId::IDN), 1u);

  const Report r = analyze(s);
  EXPECT_EQ(count(r, RuleId::IBS), 0u);
  EXPECT_TRUE(noted(r, RuleId::IBS));
}

TEST(Analyze, PassOrdering) {
  ModelSpec s = model({dense(8), dense(4)}, InputType::tabular);
  s.learner.learning_rate = 0.5;
  s.learner.batch_size = 8;
  const Report r = analyze(s);
  bool in_parameter_pass = false;
  for (const Finding& f : r.findings) {
    const bool param = rules::descriptor(f.rule_id).technique == rules::Technique::parameter_sensitive;
    if (param) in_parameter_pass = true;
    EXPECT_FALSE(in_parameter_pass && !param) << "call-strings finding after parameter finding";
  }
  EXPECT_TRUE(in_parameter_pass);
}

TEST(Analyze, DeterministicOnRandomSpecs) {
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const ModelSpec s = testing::random_spec(rng);
    EXPECT_EQ(analyze(s), analyze(s));
  }
}

TEST(Analyze, VerdictMatchesFindings) {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Report r = analyze(testing::random_spec(rng));
    EXPECT_EQ(r.verdict, verdict_of(r.findings));
  }
}

TEST(Config, TurningOneRuleOffLeavesOthersAlone) {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    const ModelSpec s = testing::random_spec(rng);
    const Report all = analyze(s);
    for (RuleId off : kAllRules) {
      AnalysisConfig config;
      config.severity_overrides[off] = RuleSetting::off;
      std::vector<Finding> expected;
      std::copy_if(all.findings.begin(), all.findings.end(), std::back_inserter(expected),
                   [&](const Finding& f) { return f.rule_id != off; });
      const Report r = analyze(s, config);
      EXPECT_EQ(r.findings, expected) << to_string(off);
      EXPECT_FALSE(noted(r, off));
    }
  }
}

TEST(Config, SeverityOverride) {
  AnalysisConfig config;
  config.severity_overrides[RuleId::CNL] = RuleSetting::warning;
  const Report r = analyze(model({dense(8)}), config);
  ASSERT_EQ(count(r, RuleId::CNL), 1u);
  EXPECT_EQ(r.findings[0].severity, Severity::warning);
}

TEST(Profiles, MinimalDropsMnl) {
  const ModelSpec s = parse_model_spec(testing::read_fixture("buggy_cnn.spec.json"));
  EXPECT_GT(count(analyze(s), RuleId::MNL), 0u);
  EXPECT_EQ(count(analyze(s, AnalysisConfig::for_profile(Profile::minimal)), RuleId::MNL), 0u);
}

TEST(Profiles, StrictLlmRejectsSparseLoss) {
  ModelSpec s = model({dense(16), act(ActivationKind::relu), layer(LayerKind::dropout), dense(3),
                       act(ActivationKind::softmax)},
                      InputType::tabular, ProblemType::multiclass_classification);
  s.layers[2].rate = 0.3;
  s.dataset.num_classes = 3;
  s.learner.loss = Loss{LossKind::sparse_categorical_crossentropy, {}};
  EXPECT_EQ(count(analyze(s), RuleId::LLM), 0u);
  EXPECT_EQ(count(analyze(s, AnalysisConfig::for_profile(Profile::strict_llm)), RuleId::LLM), 1u);
  EXPECT_EQ(parse_profile("strict-llm"), Profile::strict_llm);
  EXPECT_EQ(parse_profile("default"), Profile::standard);
  EXPECT_FALSE(parse_profile("loud").has_value());
}

std::vector<Finding> sorted(std::vector<Finding> v) {
  std::sort(v.begin(), v.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.rule_id, a.layer_index, a.message) < std::tie(b.rule_id, b.layer_index, b.message);
  });
  return v;
}

TEST(Decomposition, EngineEqualsUnionOfStandaloneRules) {
  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) {
    const ModelSpec s = testing::random_spec(rng);
    const AnalysisConfig config;
    EXPECT_EQ(sorted(analyze(s, config).findings), sorted(testing::evaluate_all(s, config)))
        << serialize_model_spec(s);
  }
}

// Each rule may read only the dataset fields it declares.
TEST(DatasetCharacteristics, UndeclaredFieldsDoNotMatter) {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 150; ++i) {
    const ModelSpec base = testing::random_spec(rng);
    for (RuleId id : kAllRules) {
      const auto& fields = rules::descriptor(id).dataset_fields;
      auto declared = [&](rules::DatasetField f) { return std::find(fields.begin(), fields.end(), f) != fields.end(); };
      ModelSpec p = base;
      if (!declared(rules::DatasetField::value_range)) {
        p.dataset.value_range = coin(rng) ? std::optional<ValueRange>{} : ValueRange{-7, 900};
      }
      if (!declared(rules::DatasetField::training_set_size)) p.dataset.training_set_size = 12345;
      if (!declared(rules::DatasetField::input_shape)) p.dataset.input_shape.clear();
      if (!declared(rules::DatasetField::input_type)) {
        p.dataset.input_type = p.dataset.is_image() ? InputType::tabular : InputType::color_images;
      }
      if (!declared(rules::DatasetField::problem_type) && !declared(rules::DatasetField::num_classes)) {
        p.dataset.problem_type = p.dataset.problem_type == ProblemType::regression
                                     ? ProblemType::multiclass_classification
                                     : ProblemType::regression;
        p.dataset.num_classes = p.dataset.problem_type == ProblemType::regression ? std::nullopt
                                                                                  : std::optional<std::int64_t>{5};
      }
      if (!declared(rules::DatasetField::num_classes) && !declared(rules::DatasetField::problem_type) &&
          p.dataset.problem_type != ProblemType::regression) {
        p.dataset.num_classes = 77;
      }
      const AnalysisConfig config;
      const auto a = testing::evaluate_rule(id, base, config);
      const auto b = testing::evaluate_rule(id, p, config);
      EXPECT_EQ(a.findings, b.findings) << to_string(id);
    }
  }
}

}  // namespace
}  // namespace theia
