#include "theia/report.hpp"

#include <sstream>

#include "json.hpp"

namespace theia {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(c - ('a' <= c && c <= 'z' ? 'a' - 'A' : 0));
  return out;
}

std::string count(std::size_t n, std::string_view noun) {
  return std::to_string(n) + " " + std::string(noun) + (n == 1 ? "" : "s");
}

std::string sub(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

template <typename T>
T require_enum(const json& obj, const char* key, std::optional<T> (*parse)(std::string_view), const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw SchemaError(sub(path, key), "expected string");
  auto v = parse(it->get<std::string>());
  if (!v) throw SchemaError(sub(path, key), "unknown value '" + it->get<std::string>() + "'");
  return *v;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw SchemaError(sub(path, key), "expected string");
  return it->get<std::string>();
}

const json& require_array(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) throw SchemaError(key, "expected array");
  return *it;
}

}  // namespace

std::string_view to_string(RuleId id) {
  switch (id) {
    case RuleId::CNL: return "CNL";
    case RuleId::INF: return "INF";
    case RuleId::INN: return "INN";
    case RuleId::IDS: return "IDS";
    case RuleId::MRD: return "MRD";
    case RuleId::MNL: return "MNL";
    case RuleId::ICL: return "ICL";
    case RuleId::IFL: return "IFL";
    case RuleId::IDN: return "IDN";
    case RuleId::LLM: return "LLM";
    case RuleId::LOB: return "LOB";
    case RuleId::IBS: return "IBS";
  }
  return "?";
}

std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::clean: return "clean";
    case Verdict::warnings: return "warnings";
    case Verdict::errors: return "errors";
  }
  return "clean";
}

std::optional<RuleId> parse_rule_id(std::string_view s) {
  for (RuleId id : kAllRules) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view s) {
  if (s == "error") return Severity::error;
  if (s == "warning") return Severity::warning;
  return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (auto v : {Verdict::clean, Verdict::warnings, Verdict::errors}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

Verdict verdict_of(const std::vector<Finding>& findings) {
  Verdict v = Verdict::clean;
  for (const auto& f : findings) {
    if (f.severity == Severity::error) return Verdict::errors;
    v = Verdict::warnings;
  }
  return v;
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  std::size_t errors = 0;
  std::size_t warnings = 0;
  for (const Finding& f : report.findings) {
    (f.severity == Severity::error ? errors : warnings)++;
    out << '[' << upper(to_string(f.severity)) << "] " << to_string(f.rule_id);
    if (f.layer_index) out << " layer " << *f.layer_index;
    if (f.source_location) out << " (" << f.source_location->file << ':' << f.source_location->line << ')';
    out << ": " << f.message << " — fix: " << f.fix_suggestion << '\n';
  }
  for (const SkipNote& n : report.skip_notes) {
    out << "note: " << to_string(n.rule_id) << " not checked: " << n.reason << '\n';
  }
  out << "verdict: " << to_string(report.verdict) << " (";
  if (report.findings.empty()) {
    out << "0 findings";
  } else {
    out << count(errors, "error") << ", " << count(warnings, "warning");
  }
  out << ")\n";
  return out.str();
}

std::string render_machine(const Report& report) {
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["verdict"] = to_string(report.verdict);
  doc["findings"] = ordered_json::array();
  for (const Finding& f : report.findings) {
    ordered_json j;
    j["rule_id"] = to_string(f.rule_id);
    j["severity"] = to_string(f.severity);
    j["layer_index"] = f.layer_index ? ordered_json(*f.layer_index) : ordered_json(nullptr);
    j["source_location"] = f.source_location
                               ? ordered_json{{"file", f.source_location->file}, {"line", f.source_location->line}}
                               : ordered_json(nullptr);
    j["message"] = f.message;
    j["fix_suggestion"] = f.fix_suggestion;
    doc["findings"].push_back(std::move(j));
  }
  doc["skip_notes"] = ordered_json::array();
  for (const SkipNote& n : report.skip_notes) {
    doc["skip_notes"].push_back(ordered_json{{"rule_id", to_string(n.rule_id)}, {"reason", n.reason}});
  }
  doc["spec_fingerprint"] = report.spec_fingerprint;
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected object");
  if (!doc.contains("version") || doc["version"] != kReportVersion) throw SchemaError("version", "unsupported version");

  Report r;
  r.verdict = require_enum<Verdict>(doc, "verdict", parse_verdict, "");
  const json& findings = require_array(doc, "findings");
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const json& j = findings[i];
    const std::string path = "findings[" + std::to_string(i) + "]";
    if (!j.is_object()) throw SchemaError(path, "expected object");
    Finding f;
    f.rule_id = require_enum<RuleId>(j, "rule_id", parse_rule_id, path);
    f.severity = require_enum<Severity>(j, "severity", parse_severity, path);
    if (auto it = j.find("layer_index"); it != j.end() && !it->is_null()) {
      if (!it->is_number_unsigned()) throw SchemaError(path + ".layer_index", "expected non-negative integer");
      f.layer_index = it->get<std::size_t>();
    }
    if (auto it = j.find("source_location"); it != j.end() && !it->is_null()) {
      const std::string lp = path + ".source_location";
      if (!it->is_object()) throw SchemaError(lp, "expected object");
      SourceLocation loc;
      loc.file = require_string(*it, "file", lp);
      auto line = it->find("line");
      if (line == it->end() || !line->is_number_integer()) throw SchemaError(lp + ".line", "expected integer");
      loc.line = line->get<std::int64_t>();
      f.source_location = std::move(loc);
    }
    f.message = require_string(j, "message", path);
    f.fix_suggestion = require_string(j, "fix_suggestion", path);
    r.findings.push_back(std::move(f));
  }
  const json& notes = require_array(doc, "skip_notes");
  for (std::size_t i = 0; i < notes.size(); ++i) {
    const std::string path = "skip_notes[" + std::to_string(i) + "]";
    if (!notes[i].is_object()) throw SchemaError(path, "expected object");
    r.skip_notes.push_back({require_enum<RuleId>(notes[i], "rule_id", parse_rule_id, path),
                            require_string(notes[i], "reason", path)});
  }
  r.spec_fingerprint = require_string(doc, "spec_fingerprint", "");
  return r;
}

int exit_code(const Report& report, Severity fail_on) {
  for (const Finding& f : report.findings) {
    if (f.severity >= fail_on) return kExitFindings;
  }
  return kExitPass;
}

}  // namespace theia
