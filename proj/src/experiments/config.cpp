#include "hybridyn/experiments/config.hpp"

#include <cmath>
#include <limits>

namespace hybridyn::experiments {
namespace {

std::string join(const std::vector<Finding>& findings) {
  std::string s = "invalid configuration:";
  for (const auto& f : findings) s += "\n  " + f.field + ": " + f.message;
  return s;
}

}  // namespace

SchemaError::SchemaError(std::vector<Finding> findings)
    : Error(join(findings)), findings_(std::move(findings)) {}

const json* ConfigReader::find(const std::string& path) const {
  const json* node = &root_;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = std::min(path.find('.', start), path.size());
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object()) return nullptr;
    auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
    start = dot + 1;
  }
  return node;
}

void ConfigReader::add(const std::string& field, const std::string& message) {
  findings_.push_back({field, message});
}

void ConfigReader::require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) add(field, message);
}

void ConfigReader::throw_if_findings() const {
  if (!findings_.empty()) throw SchemaError(findings_);
}

double ConfigReader::number(const std::string& path, double fallback) {
  const json* v = find(path);
  if (!v) return fallback;
  if (!v->is_number()) {
    add(path, "expected a number");
    return fallback;
  }
  const double d = v->get<double>();
  if (!std::isfinite(d)) {
    add(path, "must be finite");
    return fallback;
  }
  return d;
}

double ConfigReader::positive(const std::string& path, double fallback) {
  const double d = number(path, fallback);
  if (!(d > 0.0)) add(path, "must be positive");
  return d;
}

double ConfigReader::nonnegative(const std::string& path, double fallback) {
  const double d = number(path, fallback);
  if (!(d >= 0.0)) add(path, "must be nonnegative");
  return d;
}

std::uint64_t ConfigReader::unsigned_integer(const std::string& path, std::uint64_t fallback) {
  const json* v = find(path);
  if (!v) return fallback;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  }
  // Integral floats such as 1e4 are accepted up to 2^53.
  if (v->is_number_float()) {
    const double d = v->get<double>();
    if (d >= 0.0 && d <= 0x1p53 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  add(path, "expected a nonnegative integer");
  return fallback;
}

std::size_t ConfigReader::count(const std::string& path, std::size_t fallback,
                                std::size_t minimum) {
  const std::uint64_t v = unsigned_integer(path, fallback);
  if (v < minimum) add(path, "must be at least " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

bool ConfigReader::flag(const std::string& path, bool fallback) {
  const json* v = find(path);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    add(path, "expected true or false");
    return fallback;
  }
  return v->get<bool>();
}

std::string ConfigReader::text(const std::string& path, const std::string& fallback) {
  const json* v = find(path);
  if (!v) return fallback;
  if (!v->is_string()) {
    add(path, "expected a string");
    return fallback;
  }
  return v->get<std::string>();
}

std::string ConfigReader::choice(const std::string& path, const std::string& fallback,
                                 std::initializer_list<const char*> allowed) {
  const std::string s = text(path, fallback);
  for (const char* a : allowed) {
    if (s == a) return s;
  }
  std::string msg = "must be one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  add(path, msg);
  return fallback;
}

std::vector<double> ConfigReader::numbers(const std::string& path, std::vector<double> fallback) {
  const json* v = find(path);
  if (!v) return fallback;
  if (v->is_number()) return {number(path, 0.0)};
  if (!v->is_array() || v->empty()) {
    add(path, "expected a number or a nonempty array of numbers");
    return fallback;
  }
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      add(path, "array entries must be finite numbers");
      return fallback;
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> ConfigReader::counts(const std::string& path,
                                              std::vector<std::size_t> fallback,
                                              std::size_t minimum) {
  const json* v = find(path);
  if (!v) return fallback;
  if (!v->is_array() || v->empty()) {
    add(path, "expected a nonempty array of integers");
    return fallback;
  }
  std::vector<std::size_t> out;
  for (const auto& e : *v) {
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() < minimum) {
      add(path, "entries must be integers >= " + std::to_string(minimum));
      return fallback;
    }
    out.push_back(static_cast<std::size_t>(e.get<std::uint64_t>()));
  }
  return out;
}

void ConfigReader::known_keys(const std::string& path, std::initializer_list<const char*> allowed) {
  const json* node = path.empty() ? &root_ : find(path);
  if (!node) return;
  if (!node->is_object()) {
    add(path.empty() ? "(root)" : path, "expected an object");
    return;
  }
  for (auto it = node->begin(); it != node->end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) add(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

IntegratorConfig ConfigReader::integrator(const IntegratorConfig& defaults) {
  known_keys("integrator", {"method", "dt", "t_final", "fixed_point_tol", "max_fixed_point_iters",
                            "record_stride", "project_to_sphere"});
  IntegratorConfig c = defaults;
  c.method = parse_method(choice("integrator.method", method_name(defaults.method),
                                 {"implicit_midpoint", "rk4"}));
  c.dt = positive("integrator.dt", defaults.dt);
  c.t_final = nonnegative("integrator.t_final", defaults.t_final);
  c.fixed_point_tol = positive("integrator.fixed_point_tol", defaults.fixed_point_tol);
  c.max_fixed_point_iters =
      count("integrator.max_fixed_point_iters", defaults.max_fixed_point_iters);
  c.record_stride = count("integrator.record_stride", defaults.record_stride);
  c.project_to_sphere = flag("integrator.project_to_sphere", defaults.project_to_sphere);
  if (c.dt > 0.0 && c.t_final >= 0.0) {
    const double steps = c.t_final / c.dt;
    if (std::fabs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      add("integrator.t_final", "must be an integer multiple of integrator.dt");
    } else if (steps > 1e9) {
      add("integrator.t_final", "more than 1e9 steps requested");
    }
  }
  return c;
}

}  // namespace hybridyn::experiments
