#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gedanken/config.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/report.hpp"
#include "gedanken/scenarios.hpp"

using namespace gedanken;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig config(ScenarioId id, std::vector<std::string> overrides = {}) {
  return parse_config(nlohmann::json::object(), id, overrides);
}

}  // namespace

TEST_CASE("microscope with an identity kernel changes nothing") {
  const ScenarioReport r = run_scenario(config(ScenarioId::microscope, {"kernel.kind=\"identity\""}));
  REQUIRE(r.before);
  REQUIRE(r.after);
  // The dense and the pure-state momentum paths agree to rounding.
  CHECK(r.after->std_x == Approx(r.before->std_x).epsilon(1e-12));
  CHECK(r.after->std_p == Approx(r.before->std_p).epsilon(1e-9));
  CHECK(r.after->mean_x == Approx(r.before->mean_x).epsilon(1e-9).scale(1.0));
  CHECK(r.after->mean_p == Approx(r.before->mean_p).epsilon(1e-9).scale(1.0));
  CHECK(r.after->robertson_gap == Approx(r.before->robertson_gap).epsilon(1e-9).scale(1.0));
  CHECK(*r.purity_after == Approx(*r.purity_before).epsilon(1e-12));
}

TEST_CASE("microscope momentum spread adds in quadrature") {
  const ScenarioReport g = run_scenario(config(ScenarioId::microscope));
  CHECK(g.before->std_p == Approx(0.5).epsilon(1e-9));
  CHECK(g.after->std_p == Approx(std::sqrt(1.25)).epsilon(5e-3));
  CHECK(g.after->std_x == Approx(g.before->std_x).epsilon(1e-12));
  CHECK(g.after->robertson_gap > 0.0);

  // Lens window W = 4 pi sin(eps) / lambda; uniform spread has std W / sqrt(12).
  const ScenarioReport lens = run_scenario(
      config(ScenarioId::microscope, {"kernel.kind=\"lens_aperture\"", "kernel.lambda=0.5", "kernel.epsilon=0.5235987755982988"}));
  const double w = 4.0 * kPi * std::sin(kPi / 6) / 0.5;
  const double added = std::pow(lens.after->std_p, 2) - std::pow(lens.before->std_p, 2);
  CHECK(std::sqrt(added) == Approx(w / std::sqrt(12.0)).epsilon(5e-3));
}

TEST_CASE("single slit wider than the packet does not diffract") {
  const ScenarioReport r = run_scenario(config(ScenarioId::single_slit, {"aperture.width=30"}));
  CHECK(r.metrics["transmission"].get<double>() == Approx(1.0).epsilon(1e-12));
  CHECK(r.states[1].record.std_p == Approx(0.5).epsilon(1e-9));
  CHECK(r.states[2].record.std_p == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("single slit central lobe scales as 1/w") {
  std::vector<double> lobe_times_w;
  for (double w : {0.25, 0.5, 1.0}) {
    const ScenarioReport r = run_scenario(config(ScenarioId::single_slit, {"aperture.width=" + std::to_string(w)}));
    const double lobe = r.metrics["central_lobe_width"].get<double>();
    const double w_eff = r.metrics["effective_width"].get<double>();
    // Fraunhofer: first zeros at +-lambda d / w.
    CHECK(lobe == Approx(2.0 * 0.05 * 100.0 / w_eff).epsilon(0.05));
    lobe_times_w.push_back(lobe * w_eff);
    CHECK(r.metrics["coherence_after"].get<double>() < 1e-10);
    CHECK(r.metrics["intensity_deviation"].get<double>() < 1e-12);
    CHECK(r.after->std_p >= r.before->std_p);
    CHECK(r.metrics["regular_fringes"].get<bool>() == false);
    CHECK_FALSE(r.fringe_spacing.has_value());
  }
  CHECK(lobe_times_w[0] == Approx(lobe_times_w[2]).epsilon(0.05));
}

TEST_CASE("fixed double slit") {
  const ScenarioReport r = run_scenario(config(ScenarioId::double_slit));
  REQUIRE(r.fringe_spacing);
  CHECK(*r.fringe_spacing == Approx(5.0).epsilon(0.02));
  CHECK(*r.visibility > 0.98);
  CHECK(*r.tag_overlap == Approx(1.0).epsilon(1e-12));
  CHECK(r.after->std_p >= r.before->std_p * (1.0 - 1e-12));
  REQUIRE(r.intensity);
  REQUIRE(r.reference_intensity);
}

TEST_CASE("recoiling diaphragm") {
  const ScenarioReport dark =
      run_scenario(config(ScenarioId::double_slit, {"mode=\"recoiling\"", "kernel.target_overlap=0"}));
  CHECK(*dark.tag_overlap < 1e-12);
  CHECK(*dark.visibility < 0.02);

  const ScenarioReport half = run_scenario(config(ScenarioId::double_slit, {"mode=\"recoiling\""}));
  CHECK(*half.tag_overlap == Approx(0.5).epsilon(1e-9));
  CHECK(*half.visibility == Approx(0.5).epsilon(0.02));
  REQUIRE(half.fringe_spacing);
  CHECK(*half.fringe_spacing == Approx(5.0).epsilon(0.02));
  CHECK(half.after->std_p >= half.before->std_p);
  CHECK(*half.purity_after < 1.0);
}

TEST_CASE("photon scattered behind the slits") {
  const ScenarioReport r = run_scenario(config(ScenarioId::double_slit, {"mode=\"photon\""}));
  CHECK(*r.visibility == Approx(*r.tag_overlap).epsilon(0.02));
  CHECK(r.after->std_p >= r.before->std_p);
}

TEST_CASE("recoiling with an identity kernel reproduces the fixed diaphragm") {
  const ScenarioReport fixed = run_scenario(config(ScenarioId::double_slit));
  const ScenarioReport rec =
      run_scenario(config(ScenarioId::double_slit, {"mode=\"recoiling\"", "kernel.kind=\"identity\""}));
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
  CHECK(same(*fixed.visibility, *rec.visibility));
  CHECK(same(*fixed.fringe_spacing, *rec.fringe_spacing));
  CHECK(same(*fixed.tag_overlap, *rec.tag_overlap));
  CHECK(same(*fixed.purity_after, *rec.purity_after));
  REQUIRE(fixed.states.size() == rec.states.size());
  for (std::size_t i = 0; i < fixed.states.size(); ++i) {
    CHECK(same(fixed.states[i].record.std_x, rec.states[i].record.std_x));
    CHECK(same(fixed.states[i].record.std_p, rec.states[i].record.std_p));
    CHECK(same(fixed.states[i].purity, rec.states[i].purity));
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < fixed.intensity->y.size(); ++j) {
    worst = std::max(worst, std::abs(fixed.intensity->y[j] - rec.intensity->y[j]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("von neumann scenario") {
  const ScenarioReport basis = run_scenario(
      config(ScenarioId::von_neumann, {"measurement.coefficients=[1,0,0,0]"}));
  CHECK(*basis.purity_before == Approx(1.0));
  CHECK(*basis.purity_after == Approx(1.0));

  const ScenarioReport uniform = run_scenario(
      config(ScenarioId::von_neumann, {"measurement.coefficients=[1,1,1,1]"}));
  CHECK(*uniform.purity_after == Approx(0.25));

  const ScenarioReport random = run_scenario(config(ScenarioId::von_neumann, {"measurement.states=50"}));
  CHECK(random.metrics["max_moment_deviation"].get<double>() < 1e-12);
  const auto& before = random.metrics["moments_before"];
  const auto& after = random.metrics["moments_after"];
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(std::abs(before[n].get<double>() - after[n].get<double>()) < 1e-12);
  }
  CHECK(*random.purity_after < *random.purity_before);
}

TEST_CASE("landau-peierls scenario") {
  const ScenarioReport t1 = run_scenario(config(ScenarioId::landau_peierls));
  const double step = t1.metrics["scan_step"].get<double>();
  CHECK(t1.metrics["zeros"][0].get<double>() == Approx(2.0 * kPi).epsilon(step).scale(1.0));
  CHECK(t1.metrics["peak"].get<double>() == Approx(0.25).epsilon(1e-12));
  // sin(u/2)^2 / (u/2)^2 = 1/2 at u = 2.78311...
  CHECK(t1.metrics["half_width_times_t"].get<double>() == Approx(2.7831).epsilon(1e-4));
  REQUIRE(t1.intensity);
  CHECK(*std::max_element(t1.intensity->y.begin(), t1.intensity->y.end()) == Approx(1.0));

  const ScenarioReport t2 = run_scenario(config(ScenarioId::landau_peierls, {"landau_peierls.t=2"}));
  CHECK(t2.metrics["zeros"][0].get<double>() == Approx(kPi).epsilon(1e-6));
  CHECK(t2.metrics["peak"].get<double>() == Approx(1.0).epsilon(1e-12));
  CHECK(t2.metrics["half_width_times_t"].get<double>() == Approx(2.7831).epsilon(1e-4));

  // Dense-scan oracle for the half width.
  double u = 0.0;
  while (std::pow(std::sin(u / 2) / (u / 2 + 1e-300), 2) >= 0.5 || u == 0.0) u += 1e-6;
  CHECK(t1.metrics["half_width"].get<double>() == Approx(u).epsilon(1e-5));
}

TEST_CASE("report invariants") {
  ScenarioReport r;
  r.visibility = 1.2;
  CHECK_THROWS_AS(check_report(r), InvariantViolation);
  r.visibility = 0.5;
  CHECK_NOTHROW(check_report(r));
  r.before = UncertaintyRecord{0.0, 0.1, 0.0, 0.1, -0.49};
  CHECK_THROWS_AS(check_report(r), InvariantViolation);
  r.before.reset();
  r.metrics["x"] = std::nan("");
  CHECK_THROWS_AS(check_report(r), InvariantViolation);
}

TEST_CASE("every scenario is deterministic and keeps the robertson bound") {
  for (auto id : {ScenarioId::microscope, ScenarioId::single_slit, ScenarioId::double_slit,
                  ScenarioId::von_neumann, ScenarioId::landau_peierls}) {
    auto a = summary_json(run_scenario(config(id)));
    auto b = summary_json(run_scenario(config(id)));
    a.erase("duration_seconds");
    b.erase("duration_seconds");
    CHECK(a.dump() == b.dump());
    for (const auto& s : a["states"]) {
      CHECK(s["record"]["robertson_gap"].get<double>() >= -kRobertsonTolerance);
    }
  }
}
