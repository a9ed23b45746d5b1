#include "gedanken/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "gedanken/errors.hpp"
#include "gedanken/propagation.hpp"

namespace gedanken {

using nlohmann::json;

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::microscope: return "microscope";
    case ScenarioId::single_slit: return "single-slit";
    case ScenarioId::double_slit: return "double-slit";
    case ScenarioId::von_neumann: return "von-neumann";
    case ScenarioId::landau_peierls: return "landau-peierls";
  }
  return "unknown";
}

std::string to_string(SlitMode mode) {
  switch (mode) {
    case SlitMode::fixed: return "fixed";
    case SlitMode::recoiling: return "recoiling";
    case SlitMode::photon: return "photon";
  }
  return "unknown";
}

ScenarioId parse_scenario_id(const std::string& name) {
  for (auto id : {ScenarioId::microscope, ScenarioId::single_slit, ScenarioId::double_slit,
                  ScenarioId::von_neumann, ScenarioId::landau_peierls}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigurationError("unknown scenario '" + name +
                           "' (expected microscope, single-slit, double-slit, von-neumann or "
                           "landau-peierls)");
}

static SlitMode parse_mode(const std::string& name) {
  for (auto m : {SlitMode::fixed, SlitMode::recoiling, SlitMode::photon}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigParseError("config key 'mode': unknown mode '" + name +
                         "' (expected fixed, recoiling or photon)");
}

double BeamConfig::wavelength() const { return 2.0 * std::numbers::pi / p0; }

KernelSpec kernel_spec(const KernelConfig& cfg, double separation) {
  if (cfg.kind == "identity") return KernelSpec::identity();
  if (cfg.kind == "gaussian") return KernelSpec::gaussian(cfg.s);
  if (cfg.kind == "boxcar") return KernelSpec::boxcar(cfg.width);
  if (cfg.kind == "lens_aperture") return KernelSpec::lens_aperture(cfg.lambda, cfg.epsilon);
  if (cfg.kind == "overlap") return kernel_for_overlap(cfg.target_overlap, separation);
  throw ConfigurationError("unknown kernel kind '" + cfg.kind +
                           "' (expected identity, gaussian, boxcar, lens_aperture or overlap)");
}

ScatteringKernel make_kernel(const KernelConfig& cfg, const Grid& grid, double separation) {
  if (!(cfg.step_fraction > 0.0 && cfg.step_fraction <= 1.0)) {
    throw ConfigurationError("kernel.step_fraction must lie in (0, 1]");
  }
  return kernel_preset(kernel_spec(cfg, separation), grid.dp() * cfg.step_fraction);
}

namespace {

std::string type_name(const json& v) { return v.type_name(); }

/// Reads the keys of one JSON object, remembering which were used so that
/// leftovers can be reported.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw ConfigParseError("config key '" + path_ + "': expected an object, got " +
                             type_name(obj_));
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  [[noreturn]] void type_error(const std::string& key, const char* expected, const json& v) const {
    throw ConfigParseError("config key '" + key_path(key) + "': expected " + expected + ", got " +
                           type_name(v));
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) type_error(key, "a number", *v);
      out = v->get<double>();
    }
  }

  static bool is_count(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  }

  void read(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!is_count(*v)) type_error(key, "a non-negative integer", *v);
      out = v->get<std::size_t>();
    }
  }

  void read(const std::string& key, std::uint64_t& out, int) {
    if (const json* v = find(key)) {
      if (!is_count(*v)) type_error(key, "a non-negative integer", *v);
      out = v->get<std::uint64_t>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) type_error(key, "a string", *v);
      out = v->get<std::string>();
    }
  }

  void read(const std::string& key, RealVector& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) type_error(key, "an array of numbers", *v);
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) type_error(key, "an array of numbers", *v);
        out.push_back(e.get<double>());
      }
    }
  }

  /// Complex entries as plain numbers or [re, im] pairs.
  void read(const std::string& key, ComplexVector& out) {
    if (const json* v = find(key)) {
      const char* expected = "an array of numbers or [re, im] pairs";
      if (!v->is_array()) type_error(key, expected, *v);
      out.clear();
      for (const auto& e : *v) {
        if (e.is_number()) {
          out.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
          out.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
          type_error(key, expected, *v);
        }
      }
    }
  }

  /// Sub-object, or an empty object when absent.
  json child(const std::string& key) {
    if (const json* v = find(key)) {
      if (!v->is_object()) type_error(key, "an object", *v);
      return *v;
    }
    return json::object();
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigParseError("unknown config key '" + key_path(item.key()) + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigParseError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigParseError("override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      throw ConfigParseError("override key '" + key + "': '" + part +
                             "' is not inside an object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RealVector default_eigenvalues(std::size_t levels) {
  RealVector a(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    a[k] = static_cast<double>(k) - (static_cast<double>(levels) - 1.0) / 2.0;
  }
  return a;
}

/// Kernel used when the config leaves the kind unspecified.
void default_kernel(RunConfig& cfg) {
  switch (cfg.scenario) {
    case ScenarioId::microscope:
      cfg.kernel.kind = "gaussian";
      break;
    case ScenarioId::double_slit:
      if (cfg.mode == SlitMode::fixed) {
        cfg.kernel.kind = "identity";
      } else if (cfg.mode == SlitMode::recoiling) {
        cfg.kernel.kind = "overlap";
      } else {
        cfg.kernel.kind = "lens_aperture";
        cfg.kernel.lambda = 1.0;
        cfg.kernel.epsilon = std::numbers::pi / 12.0;
      }
      break;
    default:
      cfg.kernel.kind = "identity";
      break;
  }
}

bool uses_grid(ScenarioId id) {
  return id == ScenarioId::microscope || id == ScenarioId::single_slit ||
         id == ScenarioId::double_slit;
}

}  // namespace

RunConfig parse_config(json document, std::optional<ScenarioId> scenario,
                       std::span<const std::string> overrides) {
  if (!document.is_object()) {
    throw ConfigParseError("config document must be a JSON object");
  }
  for (const auto& o : overrides) apply_override(document, o);

  RunConfig cfg;
  Section top(document, "");

  std::string name;
  top.read("scenario", name);
  if (!name.empty()) {
    const ScenarioId from_doc = parse_scenario_id(name);
    if (scenario && *scenario != from_doc) {
      throw ConfigurationError("config names scenario '" + name + "' but '" +
                               to_string(*scenario) + "' was requested");
    }
    cfg.scenario = from_doc;
  } else if (scenario) {
    cfg.scenario = *scenario;
  } else {
    throw ConfigurationError("no scenario given");
  }

  std::string mode = to_string(cfg.mode);
  top.read("mode", mode);
  cfg.mode = parse_mode(mode);

  {
    json sub = top.child("grid");
    Section s(sub, "grid");
    s.read("x_min", cfg.grid.x_min);
    s.read("x_max", cfg.grid.x_max);
    s.read("n_points", cfg.grid.n_points);
    s.finish();
  }
  {
    json sub = top.child("packet");
    Section s(sub, "packet");
    s.read("x0", cfg.packet.x0);
    s.read("p0", cfg.packet.p0);
    s.read("sigma", cfg.packet.sigma);
    s.finish();
  }
  {
    json sub = top.child("aperture");
    Section s(sub, "aperture");
    if (cfg.scenario == ScenarioId::single_slit) cfg.aperture.width = 0.5;
    s.read("center", cfg.aperture.center);
    s.read("width", cfg.aperture.width);
    s.read("separation", cfg.aperture.separation);
    s.finish();
  }
  {
    json sub = top.child("kernel");
    Section s(sub, "kernel");
    const bool explicit_kind = s.has("kind");
    if (!explicit_kind) default_kernel(cfg);
    s.read("kind", cfg.kernel.kind);
    s.read("s", cfg.kernel.s);
    s.read("width", cfg.kernel.width);
    s.read("lambda", cfg.kernel.lambda);
    s.read("epsilon", cfg.kernel.epsilon);
    s.read("target_overlap", cfg.kernel.target_overlap);
    s.read("step_fraction", cfg.kernel.step_fraction);
    s.finish();
  }
  {
    json sub = top.child("beam");
    Section s(sub, "beam");
    s.read("distance", cfg.beam.distance);
    s.read("mass", cfg.beam.mass);
    s.read("p0", cfg.beam.p0);
    s.finish();
  }
  {
    json sub = top.child("measurement");
    Section s(sub, "measurement");
    s.read("levels", cfg.measurement.levels);
    s.read("eigenvalues", cfg.measurement.eigenvalues);
    s.read("coefficients", cfg.measurement.coefficients);
    s.read("seed", cfg.measurement.seed, 0);
    s.read("states", cfg.measurement.states);
    s.finish();
    if (cfg.measurement.eigenvalues.empty()) {
      cfg.measurement.eigenvalues = default_eigenvalues(cfg.measurement.levels);
    }
  }
  {
    json sub = top.child("landau_peierls");
    Section s(sub, "landau_peierls");
    s.read("t", cfg.landau_peierls.t);
    s.read("delta_e_max", cfg.landau_peierls.delta_e_max);
    s.read("samples", cfg.landau_peierls.samples);
    s.read("zeros", cfg.landau_peierls.zeros);
    s.finish();
  }
  top.read("visibility_window", cfg.visibility_window);
  top.read("output_dir", cfg.output_dir);
  top.finish();

  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path, std::optional<ScenarioId> scenario,
                            std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << path.string() << ":" << line << ":" << column << ": malformed JSON: " << e.what();
    throw ConfigParseError(msg.str());
  }
  return parse_config(std::move(doc), scenario, overrides);
}

json to_json(const RunConfig& cfg) {
  json coeffs = json::array();
  for (const auto& c : cfg.measurement.coefficients) coeffs.push_back({c.real(), c.imag()});
  return json{
      {"scenario", to_string(cfg.scenario)},
      {"mode", to_string(cfg.mode)},
      {"grid",
       {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max}, {"n_points", cfg.grid.n_points}}},
      {"packet", {{"x0", cfg.packet.x0}, {"p0", cfg.packet.p0}, {"sigma", cfg.packet.sigma}}},
      {"aperture",
       {{"center", cfg.aperture.center},
        {"width", cfg.aperture.width},
        {"separation", cfg.aperture.separation}}},
      {"kernel",
       {{"kind", cfg.kernel.kind},
        {"s", cfg.kernel.s},
        {"width", cfg.kernel.width},
        {"lambda", cfg.kernel.lambda},
        {"epsilon", cfg.kernel.epsilon},
        {"target_overlap", cfg.kernel.target_overlap},
        {"step_fraction", cfg.kernel.step_fraction}}},
      {"beam",
       {{"distance", cfg.beam.distance}, {"mass", cfg.beam.mass}, {"p0", cfg.beam.p0}}},
      {"measurement",
       {{"levels", cfg.measurement.levels},
        {"eigenvalues", cfg.measurement.eigenvalues},
        {"coefficients", coeffs},
        {"seed", cfg.measurement.seed},
        {"states", cfg.measurement.states}}},
      {"landau_peierls",
       {{"t", cfg.landau_peierls.t},
        {"delta_e_max", cfg.landau_peierls.delta_e_max},
        {"samples", cfg.landau_peierls.samples},
        {"zeros", cfg.landau_peierls.zeros}}},
      {"visibility_window", cfg.visibility_window},
      {"output_dir", cfg.output_dir},
  };
}

void validate(const RunConfig& cfg) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigurationError(message);
  };

  if (cfg.output_dir.empty()) throw ConfigurationError("output_dir must not be empty");

  if (uses_grid(cfg.scenario)) {
    const Grid grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
    const auto& p = cfg.packet;
    require(std::isfinite(p.x0) && std::isfinite(p.p0), "packet.x0 and packet.p0 must be finite");
    require(p.x0 > grid.x_min() && p.x0 < grid.x_max(), "packet.x0 must lie inside the grid");
    require(p.sigma >= 4.0 * grid.dx(),
            "packet.sigma must be at least 4 grid spacings (resolvability)");
    require(p.sigma <= grid.extent() / 8.0, "packet.sigma must be at most 1/8 of the grid extent");
    require(std::abs(p.p0) + 8.0 / p.sigma < grid.p_max(),
            "packet momentum content exceeds the grid's momentum range");

    if (cfg.scenario != ScenarioId::microscope) {
      require(cfg.beam.distance > 0.0, "beam.distance must be positive");
      require(cfg.beam.mass > 0.0, "beam.mass must be positive");
      require(cfg.beam.p0 > 0.0, "beam.p0 must be positive");
    }

    if (cfg.scenario == ScenarioId::single_slit) {
      Aperture::single_slit(cfg.aperture.center, cfg.aperture.width).validate(grid);
    }
    if (cfg.scenario == ScenarioId::double_slit) {
      const Aperture ap = Aperture::double_slit(cfg.aperture.center, cfg.aperture.width,
                                                cfg.aperture.separation);
      ap.validate(grid);
      require(cfg.visibility_window > 0.0 && cfg.visibility_window <= 1.0,
              "visibility_window must lie in (0, 1]");
      const double period =
          cfg.beam.wavelength() * cfg.beam.distance / cfg.aperture.separation;
      require(cfg.visibility_window * grid.extent() >= 3.0 * period,
              "visibility window must contain at least 3 fringe periods");
      if (cfg.mode == SlitMode::fixed) {
        require(cfg.kernel.kind == "identity",
                "fixed mode uses no scatterer; kernel.kind must be identity");
      }
    }
    if (cfg.scenario == ScenarioId::microscope || cfg.scenario == ScenarioId::double_slit) {
      make_kernel(cfg.kernel, grid, cfg.aperture.separation);
    }
  }

  if (cfg.scenario == ScenarioId::von_neumann) {
    const auto& m = cfg.measurement;
    require(m.levels >= 2, "measurement.levels must be at least 2");
    require(m.eigenvalues.size() == m.levels,
            "measurement.eigenvalues must have measurement.levels entries");
    require(m.states >= 1, "measurement.states must be at least 1");
    if (!m.coefficients.empty()) {
      require(m.coefficients.size() == m.levels,
              "measurement.coefficients must have measurement.levels entries");
      require(m.states == 1, "explicit measurement.coefficients describe a single state");
    }
  }

  if (cfg.scenario == ScenarioId::landau_peierls) {
    const auto& lp = cfg.landau_peierls;
    require(lp.t > 0.0, "landau_peierls.t must be positive");
    require(lp.samples >= 3 && lp.samples % 2 == 1,
            "landau_peierls.samples must be odd and at least 3");
    require(lp.zeros >= 1, "landau_peierls.zeros must be at least 1");
    require(lp.delta_e_max > 2.0 * std::numbers::pi * (static_cast<double>(lp.zeros) + 0.5) / lp.t,
            "landau_peierls.delta_e_max must extend past the requested zeros");
    const double step = 2.0 * lp.delta_e_max / static_cast<double>(lp.samples - 1);
    require(step * lp.t < 0.1, "landau_peierls scan is too coarse to resolve the zeros");
  }
}

}  // namespace gedanken
