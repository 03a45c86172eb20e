#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridyn/experiments/config.hpp"

namespace hybridyn::experiments {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

Check check_at_most(std::string name, double value, double threshold);
Check check_at_least(std::string name, double value, double threshold);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  std::string experiment;
  std::uint64_t seed = 0;
  Table table;
  std::vector<Check> checks;
  json details = json::object();
  std::vector<std::string> warnings;

  bool passed() const;
  const Check& check(const std::string& name) const;
};

// Names accepted in the "experiment" field.
const std::vector<std::string>& experiment_names();

// Schema and precondition findings; empty when the document is runnable.
std::vector<Finding> validate_config(const json& config);

// Throws SchemaError on invalid input and hybridyn::Error (typically
// ConvergenceError) on numerical failure.
ExperimentResult run_experiment(const json& config);

// Per-experiment entry points. `parse_*` fills findings on the reader; the
// run functions validate first.
void parse_peres_terno(ConfigReader& r);
void parse_qbit_decoherence(ConfigReader& r);
void parse_two_body(ConfigReader& r);
void parse_ensemble_separability(ConfigReader& r);
void parse_sphere_identities(ConfigReader& r);
void parse_bracket_closure(ConfigReader& r);

ExperimentResult run_peres_terno(const json& config);
ExperimentResult run_qbit_decoherence(const json& config);
ExperimentResult run_two_body(const json& config);
ExperimentResult run_ensemble_separability(const json& config);
ExperimentResult run_sphere_identities(const json& config);
ExperimentResult run_bracket_closure(const json& config);

}  // namespace hybridyn::experiments
