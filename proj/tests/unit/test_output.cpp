#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hybridyn/experiments/output.hpp"
#include "hybridyn/format.hpp"
#include "hybridyn/rng.hpp"

using namespace hybridyn;
using namespace hybridyn::experiments;

TEST_CASE("number text round trips exactly") {
  Philox rng(71);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.normal(), static_cast<int>(rng.uniform() * 200.0) - 100);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_double(6.02214076e23) == "6.0221407599999999e+23");
  CHECK(parse_double(format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
  CHECK_THROWS(parse_double("1,5"));
  CHECK_THROWS(parse_double("2.0x"));
}

TEST_CASE("csv layout") {
  Table t{{"t", "x"}, {{0.0, 0.1}, {1.0, -1.0 / 3.0}}};
  const Provenance prov{"demo", 42, "abc123", "0.1.0"};
  const std::string csv = render_csv(t, prov);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "# experiment=demo");
  CHECK(lines[1] == "# seed=42");
  CHECK(lines[2] == "# params_digest=abc123");
  CHECK(lines[5] == "t,x");
  CHECK(lines[6] == "0,0.10000000000000001");
  CHECK(parse_double(lines[7].substr(2)) == -1.0 / 3.0);
}

TEST_CASE("params digest") {
  CHECK(params_digest(json::object()) ==
        "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
  const json a = json::parse(R"({"experiment":"x","seed":1,"model":{"m":1,"M":2}})");
  const json b = json::parse(R"({ "model": {"M": 2, "m": 1}, "seed": 1, "experiment": "x" })");
  const json c = json::parse(R"({"experiment":"x","seed":2,"model":{"m":1,"M":2}})");
  CHECK(params_digest(a) == params_digest(b));
  CHECK(params_digest(a) != params_digest(c));
  CHECK(params_digest(a).size() == 64);
}

TEST_CASE("summary carries provenance and checks") {
  ExperimentResult r;
  r.experiment = "demo";
  r.seed = 9;
  r.checks = {check_at_most("drift", 1e-10, 1e-9), check_at_least("ratio", 0.5, 1.0)};
  const json s = render_summary(r, {"demo", 9, "d1", "0.1.0"}, "demo.csv");
  CHECK(s["experiment"] == "demo");
  CHECK(s["seed"] == 9);
  CHECK(s["params_digest"] == "d1");
  REQUIRE(s["checks"].size() == 2);
  CHECK(s["checks"][0]["pass"] == true);
  CHECK(s["checks"][1]["pass"] == false);
  CHECK(s["checks"][1]["threshold"] == 1.0);
  CHECK(s["pass"] == false);
}

TEST_CASE("atomic write replaces the target") {
  const auto dir = std::filesystem::temp_directory_path() / "hybridyn_output_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  CHECK(s.str() == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS(write_atomic(dir / "missing" / "x.csv", "x"));
  std::filesystem::remove_all(dir);
}
