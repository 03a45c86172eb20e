#pragma once

// Typed access to an experiment configuration document. Every accessor
// records a finding instead of throwing, so one pass reports all problems.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridyn/errors.hpp"
#include "hybridyn/integrator.hpp"

namespace hybridyn::experiments {

using nlohmann::json;

struct Finding {
  std::string field;
  std::string message;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<Finding> findings);
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

class ConfigReader {
 public:
  explicit ConfigReader(const json& root) : root_(root) {}

  // Dotted paths, e.g. "model.lambda".
  const json* find(const std::string& path) const;
  bool has(const std::string& path) const { return find(path) != nullptr; }

  double number(const std::string& path, double fallback);
  double positive(const std::string& path, double fallback);
  double nonnegative(const std::string& path, double fallback);
  std::uint64_t unsigned_integer(const std::string& path, std::uint64_t fallback);
  std::size_t count(const std::string& path, std::size_t fallback, std::size_t minimum = 1);
  bool flag(const std::string& path, bool fallback);
  std::string choice(const std::string& path, const std::string& fallback,
                     std::initializer_list<const char*> allowed);
  std::string text(const std::string& path, const std::string& fallback);
  std::vector<double> numbers(const std::string& path, std::vector<double> fallback);
  std::vector<std::size_t> counts(const std::string& path, std::vector<std::size_t> fallback,
                                  std::size_t minimum = 1);

  // Reports keys of the object at `path` ("" for the root) that are not in
  // `allowed`.
  void known_keys(const std::string& path, std::initializer_list<const char*> allowed);

  IntegratorConfig integrator(const IntegratorConfig& defaults);

  void add(const std::string& field, const std::string& message);
  void require(bool ok, const std::string& field, const std::string& message);

  const std::vector<Finding>& findings() const noexcept { return findings_; }
  void throw_if_findings() const;

 private:
  const json& root_;
  std::vector<Finding> findings_;
};

}  // namespace hybridyn::experiments
