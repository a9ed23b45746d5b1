#include "gedanken/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gedanken/diagnostics.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/measurement.hpp"
#include "gedanken/propagation.hpp"
#include "gedanken/scattering.hpp"

namespace gedanken {

using nlohmann::json;

namespace {

Grid grid_of(const RunConfig& cfg) {
  return make_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
}

WaveFunction incident_packet(const RunConfig& cfg, const Grid& grid) {
  return gaussian_packet(grid, cfg.packet.x0, cfg.packet.p0, cfg.packet.sigma);
}

StateSummary summarize(std::string label, const WaveFunction& wf) {
  return {std::move(label), robertson_record(wf), 1.0};
}

StateSummary summarize(std::string label, const DensityMatrix& rho) {
  return {std::move(label), robertson_record(rho), rho.purity()};
}

/// sum_{j != k} |psi_j| |psi_k|, the coherence norm of |psi><psi|.
double pure_coherence_norm(const WaveFunction& wf) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& a : wf.amplitudes()) {
    sum += std::abs(a);
    sum_sq += std::norm(a);
  }
  return sum * sum - sum_sq;
}

Curve curve_on(const Grid& grid, RealVector values) { return {grid.positions(), std::move(values)}; }

/// Distance between the minima that bracket the global maximum. A minimum is
/// accepted once the intensity rises 1% of the peak above it.
double central_lobe_width(const Grid& grid, std::span<const double> intensity) {
  const auto peak = static_cast<std::size_t>(
      std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
  const double rise = 0.01 * intensity[peak];
  auto walk = [&](int dir) -> std::optional<std::size_t> {
    std::size_t best = peak;
    for (std::size_t i = peak; i > 0 && i + 1 < intensity.size();) {
      i = dir > 0 ? i + 1 : i - 1;
      if (intensity[i] < intensity[best]) best = i;
      if (intensity[i] > intensity[best] + rise) return best;
    }
    return std::nullopt;
  };
  const auto left = walk(-1);
  const auto right = walk(+1);
  if (!left || !right) {
    throw EstimationError("central lobe is not bracketed by minima inside the grid");
  }
  return grid.x(*right) - grid.x(*left);
}

std::size_t open_points(const Grid& grid, const Aperture& ap) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) count += ap.is_open(grid.x(j), grid.dx()) ? 1 : 0;
  return count;
}

json moments_json(const ComplexMatrix& rho, std::span<const double> eigenvalues) {
  json out = json::array();
  for (int n = 1; n <= 4; ++n) out.push_back(observable_moment(rho, eigenvalues, n));
  return out;
}

void check_finite(double v, const std::string& name) {
  if (!std::isfinite(v)) throw InvariantViolation("report field '" + name + "' is not finite");
}

void check_record(const UncertaintyRecord& r, const std::string& name) {
  check_finite(r.mean_x, name + ".mean_x");
  check_finite(r.std_x, name + ".std_x");
  check_finite(r.mean_p, name + ".mean_p");
  check_finite(r.std_p, name + ".std_p");
  check_finite(r.robertson_gap, name + ".robertson_gap");
  if (r.std_x < 0.0 || r.std_p < 0.0) {
    throw InvariantViolation("report field '" + name + "' has a negative spread");
  }
  if (r.robertson_gap < -kRobertsonTolerance) {
    throw InvariantViolation("report field '" + name + "' violates the uncertainty bound");
  }
}

void check_purity(double p, const std::string& name) {
  check_finite(p, name);
  if (!(p > 0.0 && p <= 1.0 + 1e-9)) {
    throw InvariantViolation("report field '" + name + "' is not a valid purity");
  }
}

void check_numbers(const json& j, const std::string& name) {
  if (j.is_number_float()) {
    check_finite(j.get<double>(), name);
  } else if (j.is_array() || j.is_object()) {
    for (const auto& item : j.items()) check_numbers(item.value(), name + "." + item.key());
  }
}

}  // namespace

ScenarioReport run_microscope(const RunConfig& cfg) {
  const Grid grid = grid_of(cfg);
  const WaveFunction wf = incident_packet(cfg, grid);
  const ScatteringKernel kernel = make_kernel(cfg.kernel, grid, cfg.aperture.separation);
  const DensityMatrix rho = scatter_reduced(wf, kernel);

  ScenarioReport report;
  report.states.push_back(summarize("incident", wf));
  report.states.push_back(summarize("scattered", rho));
  report.before = report.states[0].record;
  report.after = report.states[1].record;
  report.purity_before = 1.0;
  report.purity_after = report.states[1].purity;

  const RealVector diag = rho.diagonal();
  const RealVector dens = wf.density();
  double diag_dev = 0.0;
  for (std::size_t j = 0; j < diag.size(); ++j) {
    diag_dev = std::max(diag_dev, std::abs(diag[j] - dens[j]));
  }
  const double sp = report.before->std_p;
  report.metrics = {
      {"kernel", to_string(kernel_spec(cfg.kernel, cfg.aperture.separation).kind)},
      {"kernel_variance", kernel.variance()},
      {"kernel_points", kernel.size()},
      {"predicted_std_p", std::sqrt(sp * sp + kernel.variance())},
      {"position_density_deviation", diag_dev},
  };
  report.intensity = curve_on(grid, diag);
  return report;
}

ScenarioReport run_single_slit(const RunConfig& cfg) {
  const Grid grid = grid_of(cfg);
  const Aperture ap = Aperture::single_slit(cfg.aperture.center, cfg.aperture.width);
  const WaveFunction incident = incident_packet(cfg, grid);
  const Transmitted slit = apply_aperture(incident, ap);
  const double t = cfg.beam.flight_time();
  const WaveFunction screen = propagate_free(slit.state, t, cfg.beam.mass);
  const DensityMatrix detected = project_position_detection(screen);

  ScenarioReport report;
  report.states.push_back(summarize("incident", incident));
  report.states.push_back(summarize("slit", slit.state));
  report.states.push_back(summarize("screen", screen));
  report.states.push_back(summarize("detected", detected));
  report.before = report.states[2].record;
  report.after = report.states[3].record;
  report.purity_before = 1.0;
  report.purity_after = report.states[3].purity;

  const RealVector before = screen.density();
  const RealVector after = detected.diagonal();
  double intensity_dev = 0.0;
  for (std::size_t j = 0; j < before.size(); ++j) {
    intensity_dev = std::max(intensity_dev, std::abs(before[j] - after[j]));
  }

  const double w_eff = static_cast<double>(open_points(grid, ap)) * grid.dx();
  const double lambda = cfg.beam.wavelength();
  json lobe = nullptr;
  try {
    lobe = central_lobe_width(grid, before);
  } catch (const EstimationError& e) {
    emit_warning(std::string("single-slit: ") + e.what());
  }
  bool regular_fringes = false;
  try {
    regular_fringes = estimate_fringes(before, grid).regular;
  } catch (const EstimationError&) {
  }

  report.metrics = {
      {"transmission", slit.transmission},
      {"flight_time", t},
      {"wavelength", lambda},
      {"effective_width", w_eff},
      {"central_lobe_width", lobe},
      {"expected_lobe_width", 2.0 * lambda * cfg.beam.distance / w_eff},
      {"coherence_before", pure_coherence_norm(screen)},
      {"coherence_after", detected.coherence_norm()},
      {"intensity_deviation", intensity_dev},
      {"regular_fringes", regular_fringes},
  };
  report.intensity = curve_on(grid, before);
  return report;
}

ScenarioReport run_double_slit(const RunConfig& cfg) {
  const Grid grid = grid_of(cfg);
  const Aperture ap =
      Aperture::double_slit(cfg.aperture.center, cfg.aperture.width, cfg.aperture.separation);
  const double lambda = cfg.beam.wavelength();
  const double t = cfg.beam.flight_time();
  const double a = cfg.aperture.separation;
  const double fresnel = a * a / (lambda * cfg.beam.distance);
  if (fresnel >= 0.5) {
    std::ostringstream msg;
    msg << "double-slit: Fresnel number a^2/(lambda d) = " << fresnel
        << " is not small; the far-field fringe spacing lambda d / a does not apply";
    emit_warning(msg.str());
  }

  const WaveFunction incident = incident_packet(cfg, grid);
  const Transmitted slits = apply_aperture(incident, ap);
  const ScatteringKernel kernel = cfg.mode == SlitMode::fixed
                                      ? kernel_preset(KernelSpec::identity(), grid.dp())
                                      : make_kernel(cfg.kernel, grid, a);

  ScenarioReport report;
  report.states.push_back(summarize("incident", incident));
  report.states.push_back(summarize("slits", slits.state));
  {
    const DensityMatrix scattered = scatter_reduced(slits.state, kernel);
    report.states.push_back(summarize("scattered", scattered));
  }
  report.before = report.states[1].record;
  report.after = report.states[2].record;
  report.purity_before = 1.0;
  report.purity_after = report.states[2].purity;

  const BranchState branches = entangle_at_slits(slits.state, ap, kernel);
  const double overlap = std::abs(branches.gram()(0, 1));
  RealVector screen_intensity;
  {
    const DensityMatrix screen = density_from_branches(propagate_branches(branches, t, cfg.beam.mass));
    report.states.push_back(summarize("screen", screen));
    screen_intensity = intensity(screen);
  }
  const WaveFunction baseline = propagate_free(slits.state, t, cfg.beam.mass);

  const IndexWindow window = central_window(grid.size(), cfg.visibility_window);
  report.visibility = visibility(screen_intensity, window);
  try {
    report.fringe_spacing = fringe_spacing(screen_intensity, grid);
  } catch (const EstimationError& e) {
    if (*report.visibility > 0.1) emit_warning(std::string("double-slit: ") + e.what());
  }
  report.tag_overlap = overlap;

  report.metrics = {
      {"mode", to_string(cfg.mode)},
      {"kernel", to_string(cfg.mode == SlitMode::fixed
                               ? KernelKind::identity
                               : kernel_spec(cfg.kernel, a).kind)},
      {"kernel_variance", kernel.variance()},
      {"transmission", slits.transmission},
      {"flight_time", t},
      {"wavelength", lambda},
      {"fresnel_number", fresnel},
      {"expected_fringe_spacing", lambda * cfg.beam.distance / a},
      {"reference_visibility", visibility(baseline.density(), window)},
      {"window_begin", grid.x(window.begin)},
      {"window_end", grid.x(window.end - 1)},
  };
  report.intensity = curve_on(grid, std::move(screen_intensity));
  report.reference_intensity = curve_on(grid, baseline.density());
  return report;
}

ScenarioReport run_von_neumann(const RunConfig& cfg) {
  const auto& m = cfg.measurement;
  std::mt19937_64 rng(m.seed);

  ScenarioReport report;
  double max_dev = 0.0;
  double max_offdiag = 0.0;
  for (std::size_t i = 0; i < m.states; ++i) {
    const DiscreteState state = m.coefficients.empty()
                                    ? random_discrete_state(m.eigenvalues, rng)
                                    : DiscreteState(m.coefficients, m.eigenvalues);
    const ComplexMatrix rho = state.density();
    const MeasuredState measured = von_neumann_measure(state);
    for (int n = 1; n <= 4; ++n) {
      max_dev = std::max(max_dev, std::abs(observable_moment(rho, m.eigenvalues, n) -
                                           measured.moment(n)));
    }
    for (Eigen::Index r = 0; r < measured.rho.rows(); ++r) {
      for (Eigen::Index c = 0; c < measured.rho.cols(); ++c) {
        if (r != c) max_offdiag = std::max(max_offdiag, std::abs(measured.rho(r, c)));
      }
    }
    if (i == 0) {
      report.purity_before = rho.squaredNorm();
      report.purity_after = measured.purity();
      report.metrics["moments_before"] = moments_json(rho, m.eigenvalues);
      report.metrics["moments_after"] = moments_json(measured.rho, m.eigenvalues);
      report.metrics["std_before"] = observable_std(rho, m.eigenvalues);
      report.metrics["std_after"] = observable_std(measured.rho, m.eigenvalues);
      report.metrics["weights"] = measured.weights();
    }
  }
  report.metrics["states"] = m.states;
  report.metrics["levels"] = m.levels;
  report.metrics["max_moment_deviation"] = max_dev;
  report.metrics["max_offdiagonal_after"] = max_offdiag;
  return report;
}

ScenarioReport run_landau_peierls(const RunConfig& cfg) {
  const auto& lp = cfg.landau_peierls;
  const double t = lp.t;
  const double peak = landau_peierls_probability(0.0, t);
  const std::size_t n = lp.samples;
  const double step = 2.0 * lp.delta_e_max / static_cast<double>(n - 1);

  Curve curve;
  curve.x.resize(n);
  curve.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    curve.x[i] = -lp.delta_e_max + static_cast<double>(i) * step;
    curve.y[i] = landau_peierls_probability(curve.x[i], t) / peak;
  }
  const std::size_t centre = (n - 1) / 2;

  // Zeros on the positive side: sampled local minima, refined by a
  // golden-section search on the exact curve.
  json zeros = json::array();
  json expected = json::array();
  double max_zero_error = 0.0;
  std::size_t found = 0;
  for (std::size_t i = centre + 1; i + 1 < n && found < lp.zeros; ++i) {
    if (!(curve.y[i] <= curve.y[i - 1] && curve.y[i] < curve.y[i + 1])) continue;
    double lo = curve.x[i - 1], hi = curve.x[i + 1];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
      const double c = hi - g * (hi - lo);
      const double d = lo + g * (hi - lo);
      if (landau_peierls_probability(c, t) < landau_peierls_probability(d, t)) {
        hi = d;
      } else {
        lo = c;
      }
    }
    const double zero = 0.5 * (lo + hi);
    ++found;
    const double want = 2.0 * std::numbers::pi * static_cast<double>(found) / t;
    zeros.push_back(zero);
    expected.push_back(want);
    max_zero_error = std::max(max_zero_error, std::abs(zero - want));
  }
  if (found < lp.zeros) {
    throw EstimationError("landau-peierls: found only " + std::to_string(found) + " zeros");
  }

  // Half maximum: bracket from the samples, then bisect.
  std::size_t k = centre;
  while (k + 1 < n && curve.y[k + 1] >= 0.5) ++k;
  double lo = curve.x[k], hi = curve.x[k + 1];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (landau_peierls_probability(mid, t) / peak >= 0.5 ? lo : hi) = mid;
  }
  const double half_width = 0.5 * (lo + hi);

  ScenarioReport report;
  report.metrics = {
      {"t", t},
      {"peak", peak},
      {"expected_peak", t * t / 4.0},
      {"zeros", zeros},
      {"expected_zeros", expected},
      {"max_zero_error", max_zero_error},
      {"scan_step", step},
      {"half_width", half_width},
      {"half_width_times_t", half_width * t},
  };
  report.intensity = std::move(curve);
  return report;
}

ScenarioReport run_scenario(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport report;
  {
    WarningCapture capture;
    switch (cfg.scenario) {
      case ScenarioId::microscope: report = run_microscope(cfg); break;
      case ScenarioId::single_slit: report = run_single_slit(cfg); break;
      case ScenarioId::double_slit: report = run_double_slit(cfg); break;
      case ScenarioId::von_neumann: report = run_von_neumann(cfg); break;
      case ScenarioId::landau_peierls: report = run_landau_peierls(cfg); break;
    }
    report.warnings = capture.messages();
  }
  report.scenario = to_string(cfg.scenario);
  report.config = to_json(cfg);
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check_report(report);
  return report;
}

void check_report(const ScenarioReport& report) {
  if (report.before) check_record(*report.before, "before");
  if (report.after) check_record(*report.after, "after");
  for (const auto& s : report.states) {
    check_record(s.record, "states." + s.label);
    check_purity(s.purity, "states." + s.label + ".purity");
  }
  if (report.purity_before) check_purity(*report.purity_before, "purity_before");
  if (report.purity_after) check_purity(*report.purity_after, "purity_after");
  if (report.visibility) {
    check_finite(*report.visibility, "visibility");
    if (*report.visibility < 0.0 || *report.visibility > 1.0 + 1e-12) {
      throw InvariantViolation("visibility outside [0, 1]");
    }
  }
  if (report.fringe_spacing) check_finite(*report.fringe_spacing, "fringe_spacing");
  if (report.tag_overlap) {
    check_finite(*report.tag_overlap, "tag_overlap");
    if (*report.tag_overlap < 0.0 || *report.tag_overlap > 1.0 + 1e-9) {
      throw InvariantViolation("tag_overlap outside [0, 1]");
    }
  }
  for (const auto* c : {&report.intensity, &report.reference_intensity}) {
    if (!*c) continue;
    if ((*c)->x.size() != (*c)->y.size()) throw InvariantViolation("curve length mismatch");
    for (double v : (*c)->y) {
      check_finite(v, "intensity");
      if (v < -1e-12) throw InvariantViolation("negative intensity");
    }
  }
  check_numbers(report.metrics, "metrics");
}

}  // namespace gedanken
