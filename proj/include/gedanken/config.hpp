#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gedanken/errors.hpp"
#include "gedanken/grid.hpp"
#include "gedanken/scattering.hpp"

namespace gedanken {

enum class ScenarioId { microscope, single_slit, double_slit, von_neumann, landau_peierls };
enum class SlitMode { fixed, recoiling, photon };

std::string to_string(ScenarioId id);
std::string to_string(SlitMode mode);
ScenarioId parse_scenario_id(const std::string& name);

struct GridConfig {
  double x_min = -64.0;
  double x_max = 64.0;
  std::size_t n_points = 4096;
};

/// Incident packet in the transverse coordinate.
struct PacketConfig {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
};

struct ApertureConfig {
  double center = 0.0;
  double width = 0.16;
  double separation = 1.0;
};

/// Kernel selection. kind "overlap" picks the preset whose tag overlap at
/// the slit separation equals target_overlap.
struct KernelConfig {
  std::string kind = "gaussian";
  double s = 1.0;
  double width = 6.283185307179586;
  double lambda = 0.5;
  double epsilon = 0.5235987755982988;
  double target_overlap = 0.5;
  /// Kernel lattice step as a fraction of the grid momentum spacing.
  double step_fraction = 0.25;
};

/// Longitudinal flight to the screen: distance d, mass m, momentum p0. The
/// flight time is d*m/p0 and the de Broglie wavelength 2*pi/p0.
struct BeamConfig {
  double distance = 100.0;
  double mass = 1.0;
  double p0 = 125.66370614359172;  // 40 pi

  double flight_time() const { return distance * mass / p0; }
  double wavelength() const;
};

struct MeasurementConfig {
  std::size_t levels = 4;
  RealVector eigenvalues;      ///< default k - (K-1)/2
  ComplexVector coefficients;  ///< empty: random states from `seed`
  std::uint64_t seed = 20260101;
  std::size_t states = 1;
};

struct LandauPeierlsConfig {
  double t = 1.0;
  double delta_e_max = 36.0;
  std::size_t samples = 20001;
  std::size_t zeros = 5;
};

struct RunConfig {
  ScenarioId scenario = ScenarioId::double_slit;
  SlitMode mode = SlitMode::fixed;
  GridConfig grid;
  PacketConfig packet;
  ApertureConfig aperture;
  KernelConfig kernel;
  BeamConfig beam;
  MeasurementConfig measurement;
  LandauPeierlsConfig landau_peierls;
  double visibility_window = 0.2;
  std::string output_dir = "out";
};

/// Resolved preset for the configured kernel.
KernelSpec kernel_spec(const KernelConfig& cfg, double separation);
ScatteringKernel make_kernel(const KernelConfig& cfg, const Grid& grid, double separation);

/// Parse failures (malformed JSON, wrong types, unknown keys); messages carry
/// line or key context.
class ConfigParseError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

/// Builds a validated RunConfig from a JSON document and `key=value`
/// overrides (dotted keys, JSON-typed values; overrides win). When
/// `scenario` is given it must agree with any "scenario" key in the
/// document. Unknown keys are rejected. Scenario-dependent defaults are
/// filled in before validation.
RunConfig parse_config(nlohmann::json document, std::optional<ScenarioId> scenario,
                       std::span<const std::string> overrides = {});

RunConfig parse_config_file(const std::filesystem::path& path, std::optional<ScenarioId> scenario,
                            std::span<const std::string> overrides = {});

/// Full echo of a RunConfig; parse_config(to_json(cfg), ...) reproduces it.
nlohmann::json to_json(const RunConfig& cfg);

/// Checks every precondition that can be verified without running.
void validate(const RunConfig& cfg);

}  // namespace gedanken
