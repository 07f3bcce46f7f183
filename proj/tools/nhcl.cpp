// nhcl run <config> [--scenario NAME] [--out DIR] [--set key=value]...
//
// Exit codes: 0 success, 1 verify finished with failing checks,
// 2 configuration error, 3 numerical error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nhcl/scenario/dispatch.hpp"

namespace {

int run_command(const std::string& path, const std::optional<std::string>& scenario,
                const std::optional<std::string>& out, const std::vector<std::string>& sets) {
  using namespace nhcl;
  scenario::ScenarioConfig cfg;
  try {
    scenario::Entries overrides;
    for (const auto& kv : sets) overrides.push_back(scenario::parse_assignment(kv));
    if (out) overrides.emplace_back("out", *out);
    cfg = scenario::resolve(scenario::parse_entries(scenario::read_file(path)), scenario, overrides);
  } catch (const error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto report = scenario::run(cfg, [](const std::string& line) { std::cout << line << std::endl; });
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    if (cfg.scenario != scenario::Kind::verify)
      for (const auto& line : report.lines) std::cout << line << '\n';
    for (const auto& f : report.files) std::cout << "wrote " << cfg.out << '/' << f << '\n';
    return report.ok ? 0 : 1;
  } catch (const error& e) {
    if (e.code() == errc::config) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian quantum and classical dynamics scenarios"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario from a config file");
  std::string path;
  std::optional<std::string> scenario, out;
  std::vector<std::string> sets;
  run->add_option("config", path, "Config file (key = value lines)")->required();
  run->add_option("--scenario", scenario, "Scenario name, overrides the file");
  run->add_option("--out", out, "Output directory, overrides the file");
  run->add_option("--set", sets, "Override one key, key=value")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run_command(path, scenario, out, sets);
}
