#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hybridyn/experiments/experiment.hpp"

namespace hybridyn::experiments {

// Hex SHA-256 of the compact serialization of the configuration (object keys
// sorted), so formatting and key order of the input file do not matter.
std::string params_digest(const json& config);

struct Provenance {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string digest;
  std::string version;
};

// "# key=value" provenance lines, a header row, then rows with 17
// significant digits and LF endings.
std::string render_csv(const Table& table, const Provenance& prov);

json render_summary(const ExperimentResult& result, const Provenance& prov,
                    const std::string& csv_name);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hybridyn::experiments
