#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gedanken/config.hpp"
#include "gedanken/observables.hpp"

namespace gedanken {

/// Sampled curve written to CSV (x column, I column).
struct Curve {
  RealVector x;
  RealVector y;
};

struct StateSummary {
  std::string label;
  UncertaintyRecord record;
  double purity = 1.0;
};

/// Everything a scenario produces. Optional fields are null in summary.json
/// when they do not apply.
struct ScenarioReport {
  std::string scenario;
  nlohmann::json config;
  std::optional<UncertaintyRecord> before;
  std::optional<UncertaintyRecord> after;
  std::optional<double> purity_before;
  std::optional<double> purity_after;
  std::vector<StateSummary> states;
  std::optional<Curve> intensity;
  std::optional<Curve> reference_intensity;
  std::optional<double> visibility;
  std::optional<double> fringe_spacing;
  std::optional<double> tag_overlap;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> warnings;
  double duration_seconds = 0.0;
};

/// Gaussian packet scattered by the configured kernel; before/after are the
/// incident and reduced states.
ScenarioReport run_microscope(const RunConfig& cfg);

/// Packet through one slit, free flight to the screen, then position
/// detection. before/after are the screen state before and after detection.
ScenarioReport run_single_slit(const RunConfig& cfg);

/// Packet through two slits in the configured mode (fixed diaphragm,
/// recoiling diaphragm, or photon scattered behind the slits), free flight
/// to the screen. before/after bracket the scattering at the slits.
ScenarioReport run_double_slit(const RunConfig& cfg);

/// Ideal measurement on random or given K-level states; compares the
/// moments Tr(rho A^n), n = 1..4, before and after.
ScenarioReport run_von_neumann(const RunConfig& cfg);

/// Scan of the finite-time transition probability over the energy mismatch.
ScenarioReport run_landau_peierls(const RunConfig& cfg);

/// Dispatches on cfg.scenario, collects warnings and timing, and checks the
/// report invariants.
ScenarioReport run_scenario(const RunConfig& cfg);

/// Throws InvariantViolation for non-finite numbers, a visibility outside
/// [0, 1], purities outside (0, 1] or a Robertson gap below tolerance.
void check_report(const ScenarioReport& report);

}  // namespace gedanken
