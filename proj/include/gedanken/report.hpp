#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gedanken/scenarios.hpp"

namespace gedanken {

inline constexpr int kSummarySchemaVersion = 1;

/// Scalar content of a report; keys are sorted, absent fields are null.
nlohmann::json summary_json(const ScenarioReport& report);

/// Two-column CSV with a header line "x,I", full precision.
void write_curve_csv(const std::filesystem::path& path, const Curve& curve);

/// Reads a file written by write_curve_csv.
Curve read_curve_csv(const std::filesystem::path& path);

/// Writes summary.json, intensity.csv and (when present)
/// intensity_reference.csv into `directory`, creating it if needed.
void emit_report(const ScenarioReport& report, const std::filesystem::path& directory);

}  // namespace gedanken
