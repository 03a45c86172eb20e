#include "hybridyn/experiments/output.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <fstream>
#include <sstream>
#include <system_error>

#include "hybridyn/errors.hpp"
#include "hybridyn/format.hpp"
#include "hybridyn/rng.hpp"

namespace hybridyn::experiments {

std::string params_digest(const json& config) {
  const std::string text = config.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string render_csv(const Table& table, const Provenance& prov) {
  std::string s;
  s += "# experiment=" + prov.experiment + "\n";
  s += "# seed=" + std::to_string(prov.seed) + "\n";
  s += "# params_digest=" + prov.digest + "\n";
  s += "# rng=" + std::string(kRngName) + "\n";
  s += "# version=" + prov.version + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) s += ',';
    s += table.columns[c];
  }
  s += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_double(row[c]);
    }
    s += '\n';
  }
  return s;
}

json render_summary(const ExperimentResult& result, const Provenance& prov,
                    const std::string& csv_name) {
  json checks = json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                      {"pass", c.pass}});
  }
  json j = {{"experiment", prov.experiment},
            {"seed", prov.seed},
            {"params_digest", prov.digest},
            {"rng", std::string(kRngName)},
            {"version", prov.version},
            {"checks", checks},
            {"pass", result.passed()},
            {"csv", csv_name},
            {"details", result.details}};
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

}  // namespace hybridyn::experiments
