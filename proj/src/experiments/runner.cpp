#include "hybridyn/experiments/runner.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/experiments/output.hpp"
#include "hybridyn/format.hpp"

namespace hybridyn::experiments {
namespace {

struct Entry {
  const char* name;
  void (*parse)(ConfigReader&);
  ExperimentResult (*run)(const json&);
};

const Entry kEntries[] = {
    {"peres_terno", parse_peres_terno, run_peres_terno},
    {"qbit_decoherence", parse_qbit_decoherence, run_qbit_decoherence},
    {"two_body", parse_two_body, run_two_body},
    {"ensemble_separability", parse_ensemble_separability, run_ensemble_separability},
    {"sphere_identities", parse_sphere_identities, run_sphere_identities},
    {"bracket_closure", parse_bracket_closure, run_bracket_closure},
};

const Entry* lookup(const std::string& name) {
  for (const auto& e : kEntries) {
    if (name == e.name) return &e;
  }
  return nullptr;
}

bool load(const std::filesystem::path& path, json& config, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read " << path.string() << '\n';
    return false;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    config = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    err << "error: " << path.string() << " is not valid JSON: " << e.what() << '\n';
    return false;
  }
  return true;
}

std::filesystem::path resolve(const std::filesystem::path& config_path, const json& config,
                              const char* key, const std::string& suffix) {
  const std::filesystem::path dir = config_path.parent_path();
  if (config.contains("output") && config["output"].contains(key)) {
    const std::filesystem::path p = config["output"][key].get<std::string>();
    return p.is_absolute() ? p : dir / p;
  }
  return dir / (config_path.stem().string() + suffix);
}

void print_findings(const std::vector<Finding>& findings, std::ostream& err) {
  for (const auto& f : findings) err << "error: " << f.field << ": " << f.message << '\n';
}

}  // namespace

const char* version() noexcept { return HYBRIDYN_VERSION; }

Check check_at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

Check check_at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

bool ExperimentResult::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Check& ExperimentResult::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no check named " + name);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kEntries) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::vector<Finding> validate_config(const json& config) {
  ConfigReader r(config);
  if (!config.is_object()) {
    r.add("(root)", "configuration must be a JSON object");
    return r.findings();
  }
  const json* exp = r.find("experiment");
  if (!exp) {
    r.add("experiment", "required field missing");
    return r.findings();
  }
  if (!exp->is_string()) {
    r.add("experiment", "expected a string");
    return r.findings();
  }
  const Entry* entry = lookup(exp->get<std::string>());
  if (!entry) {
    std::string msg = "unknown experiment; expected one of";
    for (const auto& e : kEntries) msg += std::string(" ") + e.name;
    r.add("experiment", msg);
    return r.findings();
  }
  r.unsigned_integer("seed", 0);
  r.known_keys("output", {"csv", "summary"});
  r.text("output.csv", "");
  r.text("output.summary", "");
  entry->parse(r);
  return r.findings();
}

ExperimentResult run_experiment(const json& config) {
  const std::vector<Finding> findings = validate_config(config);
  if (!findings.empty()) throw SchemaError(findings);
  const Entry* entry = lookup(config["experiment"].get<std::string>());
  ExperimentResult res = entry->run(config);
  res.experiment = entry->name;
  res.seed = config.value("seed", std::uint64_t{0});
  return res;
}

int validate_command(const std::filesystem::path& config_path, std::ostream& out,
                     std::ostream& err) {
  json config;
  if (!load(config_path, config, err)) return kSchemaError;
  const std::vector<Finding> findings = validate_config(config);
  json report = {{"config", config_path.string()},
                 {"valid", findings.empty()},
                 {"findings", json::array()}};
  for (const auto& f : findings) {
    report["findings"].push_back({{"field", f.field}, {"message", f.message}});
  }
  out << report.dump(2) << '\n';
  return findings.empty() ? kOk : kSchemaError;
}

int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  json config;
  if (!load(config_path, config, err)) return kSchemaError;
  const std::vector<Finding> findings = validate_config(config);
  if (!findings.empty()) {
    print_findings(findings, err);
    return kSchemaError;
  }

  ExperimentResult result;
  try {
    result = run_experiment(config);
  } catch (const SchemaError& e) {
    print_findings(e.findings(), err);
    return kSchemaError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }

  const Provenance prov{result.experiment, result.seed, params_digest(config), version()};
  const auto csv_path = resolve(config_path, config, "csv", ".csv");
  const auto summary_path = resolve(config_path, config, "summary", ".summary.json");
  try {
    write_atomic(csv_path, render_csv(result.table, prov));
    write_atomic(summary_path,
                 render_summary(result, prov, csv_path.filename().string()).dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  for (const auto& c : result.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
        << " threshold=" << format_double(c.threshold) << '\n';
  }
  out << "wrote " << csv_path.string() << " and " << summary_path.string() << '\n';
  return result.passed() ? kOk : kAcceptanceFailure;
}

}  // namespace hybridyn::experiments
