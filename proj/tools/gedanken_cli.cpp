// gedanken: run one thought-experiment scenario and write its report.
//
//   gedanken double-slit --config configs/double_slit.json --set mode=recoiling
//
// Exit status: 0 success, 1 invalid configuration, 2 failure while running.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gedanken/config.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/report.hpp"
#include "gedanken/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical thought experiments on a 1-D grid"};
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  app.add_option("scenario", scenario,
                 "microscope | single-slit | double-slit | von-neumann | landau-peierls")
      ->required();
  app.add_option("-c,--config", config_path, "JSON configuration file")->required();
  app.add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("-s,--set", overrides, "override a config value, key=value (dotted keys)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  gedanken::RunConfig cfg;
  try {
    if (!out_dir.empty()) overrides.push_back("output_dir=" + nlohmann::json(out_dir).dump());
    cfg = gedanken::parse_config_file(config_path, gedanken::parse_scenario_id(scenario),
                                      overrides);
  } catch (const gedanken::ConfigurationError& e) {
    std::cerr << "gedanken: configuration error: " << e.what() << "\n";
    return 1;
  }

  try {
    const gedanken::ScenarioReport report = gedanken::run_scenario(cfg);
    gedanken::emit_report(report, cfg.output_dir);
    for (const auto& w : report.warnings) std::cerr << "gedanken: warning: " << w << "\n";
    std::cout << "wrote " << cfg.output_dir << "/summary.json\n";
  } catch (const gedanken::ConfigurationError& e) {
    std::cerr << "gedanken: configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "gedanken: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
