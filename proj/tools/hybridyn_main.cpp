#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "hybridyn/experiments/runner.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace ex = hybridyn::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Hybrid classical-quantum dynamics experiments"};
  app.require_subcommand(1);
  std::string isa = "auto";
  app.add_option("--isa", isa, "Kernel set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV and JSON summary");
  run->add_option("config", run_path, "Experiment configuration (JSON)")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("config", validate_path, "Experiment configuration (JSON)")->required();

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kSchemaError;
  }

  try {
    if (isa == "scalar") hybridyn::simd::select(hybridyn::simd::Isa::scalar);
    if (isa == "avx2") hybridyn::simd::select(hybridyn::simd::Isa::avx2);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kSchemaError;
  }

  if (*run) return ex::run_command(run_path, std::cout, std::cerr);
  if (*validate) return ex::validate_command(validate_path, std::cout, std::cerr);
  std::cout << "hybridyn " << ex::version() << '\n';
  return ex::kOk;
}
