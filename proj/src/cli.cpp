#include "theia/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "theia/engine.hpp"
#include "theia/model_spec.hpp"
#include "theia/report.hpp"

namespace theia::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string spec_path;
  std::string format = "text";
  std::string fail_on = "error";
  std::vector<std::string> rules;
  std::string profile;
  bool lenient = false;
  std::string problem_type;
  std::string input_type;
  std::string value_range;
};

AnalysisConfig build_config(const Options& opts, const std::optional<std::string>& env_profile) {
  std::string profile_name = opts.profile;
  if (profile_name.empty() && env_profile && !env_profile->empty()) profile_name = *env_profile;
  Profile profile = Profile::standard;
  if (!profile_name.empty()) {
    auto p = parse_profile(profile_name);
    if (!p) throw UsageError("unknown profile '" + profile_name + "' (expected default, minimal or strict-llm)");
    profile = *p;
  }
  AnalysisConfig config = AnalysisConfig::for_profile(profile);
  config.fail_on = *parse_severity(opts.fail_on);
  config.lenient_parsing = opts.lenient;

  for (const std::string& entry : opts.rules) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw UsageError("--rule expects ID=error|warning|off, got '" + entry + "'");
    auto id = parse_rule_id(entry.substr(0, eq));
    if (!id) throw UsageError("unknown rule id '" + entry.substr(0, eq) + "'");
    auto setting = parse_rule_setting(entry.substr(eq + 1));
    if (!setting) throw UsageError("unknown rule setting '" + entry.substr(eq + 1) + "'");
    config.severity_overrides[*id] = *setting;
  }
  return config;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--value-range expects min,max");
  try {
    std::size_t used_min = 0;
    std::size_t used_max = 0;
    const std::string lo = text.substr(0, comma);
    const std::string hi = text.substr(comma + 1);
    double min = std::stod(lo, &used_min);
    double max = std::stod(hi, &used_max);
    if (used_min != lo.size() || used_max != hi.size()) throw std::invalid_argument("trailing characters");
    return {min, max};
  } catch (const std::logic_error&) {
    throw UsageError("--value-range expects two numbers, got '" + text + "'");
  }
}

// Dataset fields given on the command line replace or fill in those of the
// document before it is validated.
std::string apply_dataset_overrides(const std::string& text, const Options& opts) {
  if (opts.problem_type.empty() && opts.input_type.empty() && opts.value_range.empty()) return text;

  if (!opts.problem_type.empty() && !parse_problem_type(opts.problem_type)) {
    throw UsageError("unknown problem type '" + opts.problem_type + "'");
  }
  std::optional<InputType> input_type;
  if (!opts.input_type.empty()) {
    input_type = parse_input_type(opts.input_type);
    if (!input_type) throw UsageError("unknown input type '" + opts.input_type + "'");
  }
  std::optional<std::pair<double, double>> range;
  if (!opts.value_range.empty()) range = parse_range(opts.value_range);

  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected object");
  auto& dataset = doc["dataset"];
  if (dataset.is_null()) dataset = nlohmann::ordered_json::object();
  if (!dataset.is_object()) throw SchemaError("dataset", "expected object");

  if (!opts.problem_type.empty()) {
    dataset["problem_type"] = opts.problem_type;
    if (opts.problem_type == "regression") dataset.erase("num_classes");
  }
  if (input_type) {
    dataset["input_type"] = opts.input_type;
    if (*input_type == InputType::color_images) dataset["channels"] = 3;
    if (*input_type == InputType::grayscale_images) dataset["channels"] = 1;
  }
  if (range) dataset["value_range"] = {{"min", range->first}, {"max", range->second}};
  return doc.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw UsageError("error while reading '" + path + "'");
  return buf.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_profile) {
  Options opts;
  CLI::App app{"Static checker for structural bugs in deep-learning model specs", "theia-lint"};
  app.add_option("spec", opts.spec_path, "Model spec document (JSON)")->required();
  app.add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--fail-on", opts.fail_on, "Lowest severity that fails the run")
      ->check(CLI::IsMember({"error", "warning"}));
  app.add_option("--rule", opts.rules, "Per-rule setting, e.g. CNL=off or MRD=error (repeatable)");
  app.add_option("--profile", opts.profile, "default, minimal or strict-llm (env THEIA_LINT_PROFILE)");
  app.add_flag("--lenient", opts.lenient, "Ignore unknown keys in the spec document");
  app.add_option("--problem-type", opts.problem_type, "Override dataset.problem_type");
  app.add_option("--input-type", opts.input_type, "Override dataset.input_type");
  app.add_option("--value-range", opts.value_range, "Override dataset.value_range as min,max");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "theia-lint: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const AnalysisConfig config = build_config(opts, env_profile);
    const std::string text = apply_dataset_overrides(read_file(opts.spec_path), opts);
    const ModelSpec spec = parse_model_spec(text, {config.lenient_parsing});
    const Report report = analyze(spec, config);
    out << (opts.format == "json" ? render_machine(report) : render_text(report));
    return exit_code(report, config.fail_on);
  } catch (const UsageError& e) {
    err << "theia-lint: " << e.what() << "\n";
  } catch (const SpecError& e) {
    err << "theia-lint: " << opts.spec_path << ": " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace theia::cli
