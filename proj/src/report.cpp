#include "gedanken/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken {

using nlohmann::json;

namespace {

json record_json(const std::optional<UncertaintyRecord>& r) {
  if (!r) return nullptr;
  return {{"mean_x", r->mean_x},
          {"std_x", r->std_x},
          {"mean_p", r->mean_p},
          {"std_p", r->std_p},
          {"robertson_gap", r->robertson_gap}};
}

template <class T>
json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace

json summary_json(const ScenarioReport& report) {
  json states = json::array();
  for (const auto& s : report.states) {
    states.push_back({{"label", s.label}, {"record", record_json(s.record)}, {"purity", s.purity}});
  }
  return {
      {"schema_version", kSummarySchemaVersion},
      {"scenario", report.scenario},
      {"config", report.config},
      {"before", record_json(report.before)},
      {"after", record_json(report.after)},
      {"purity_before", optional_json(report.purity_before)},
      {"purity_after", optional_json(report.purity_after)},
      {"states", states},
      {"visibility", optional_json(report.visibility)},
      {"fringe_spacing", optional_json(report.fringe_spacing)},
      {"tag_overlap", optional_json(report.tag_overlap)},
      {"metrics", report.metrics},
      {"warnings", report.warnings},
      {"intensity_file", report.intensity ? json("intensity.csv") : json(nullptr)},
      {"reference_file",
       report.reference_intensity ? json("intensity_reference.csv") : json(nullptr)},
      {"duration_seconds", report.duration_seconds},
  };
}

void write_curve_csv(const std::filesystem::path& path, const Curve& curve) {
  if (curve.x.size() != curve.y.size()) throw Error("curve columns differ in length");
  std::string text = "x,I\n";
  char line[64];
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", curve.x[i], curve.y[i]);
    text += line;
  }
  write_text(path, text);
}

Curve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,I") {
    throw Error("'" + path.string() + "' does not start with the header x,I");
  }
  Curve curve;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      curve.x.push_back(std::stod(line.substr(0, comma)));
      curve.y.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(number) + ": malformed row");
    }
  }
  return curve;
}

void emit_report(const ScenarioReport& report, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  write_text(directory / "summary.json", summary_json(report).dump(2) + "\n");
  if (report.intensity) write_curve_csv(directory / "intensity.csv", *report.intensity);
  if (report.reference_intensity) {
    write_curve_csv(directory / "intensity_reference.csv", *report.reference_intensity);
  }
}

}  // namespace gedanken
