#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gedanken/diagnostics.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/observables.hpp"
#include "gedanken/propagation.hpp"
#include "gedanken/scattering.hpp"
#include "support.hpp"

using namespace gedanken;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

/// Two narrow packets at +-a/2 with tag overlap gamma.
BranchState slit_pair(const Grid& g, double a, double gamma) {
  ComplexMatrix gram(2, 2);
  gram << 1.0, gamma, gamma, 1.0;
  const Complex w(std::sqrt(0.5), 0.0);
  return BranchState({{gaussian_packet(g, -a / 2, 0.0, 0.2), w}, {gaussian_packet(g, a / 2, 0.0, 0.2), w}},
                     gram);
}

}  // namespace

TEST_CASE("position moments") {
  const Grid g(-20.0, 20.0, 1024);
  const auto m = position_moments(gaussian_packet(g, 2.0, 0.0, 1.0));
  CHECK(m.mean == Approx(2.0).epsilon(1e-10));
  CHECK(m.std == Approx(1.0).epsilon(1e-9));

  const Grid fine(-16.0, 16.0, 1024);
  ComplexMatrix rho = ComplexMatrix::Zero(1024, 1024);
  rho(fine.nearest_index(-1.0), fine.nearest_index(-1.0)) = 0.5 / fine.dx();
  rho(fine.nearest_index(1.0), fine.nearest_index(1.0)) = 0.5 / fine.dx();
  const auto mix = position_moments(DensityMatrix(fine, rho));
  CHECK(std::abs(mix.mean) < 1e-12);
  CHECK(mix.std == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("position moments of a partially coherent pair against quadrature") {
  const Grid g(-20.0, 20.0, 1024);
  const DensityMatrix rho = density_from_branches(slit_pair(g, 3.0, 0.5));
  const RealVector I = intensity(rho);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    s0 += I[j];
    s1 += g.x(j) * I[j];
    s2 += g.x(j) * g.x(j) * I[j];
  }
  const double mean = s1 / s0;
  const auto m = position_moments(rho);
  CHECK(m.mean == Approx(mean).epsilon(1e-6).scale(1.0));
  CHECK(m.std == Approx(std::sqrt(s2 / s0 - mean * mean)).epsilon(1e-6));
  CHECK(m.std == Approx(std::sqrt(2.25 + 0.2 * 0.2)).epsilon(1e-6));
}

TEST_CASE("momentum moments") {
  const Grid g(-20.0, 20.0, 1024);
  const WaveFunction wf = gaussian_packet(g, 0.0, 3.0, 1.0);
  const auto m = momentum_moments(wf);
  CHECK(m.mean == Approx(3.0).epsilon(1e-10));
  CHECK(m.std == Approx(0.5).epsilon(1e-9));
  const auto from_rho = momentum_moments(density_from_pure(wf));
  CHECK(from_rho.mean == Approx(3.0).epsilon(1e-10));
  CHECK(from_rho.std == Approx(0.5).epsilon(1e-9));
  CHECK(testing::max_abs_diff(momentum_density(density_from_pure(wf)), wf.momentum_density()) < 1e-10);

  for (double s : {0.5, 1.0, 2.0}) {
    const DensityMatrix rho = scatter_reduced(gaussian_packet(g, 0.0, 0.0, 1.0),
                                              kernel_preset(KernelSpec::gaussian(s), default_kernel_step(g)));
    CHECK(std::pow(momentum_moments(rho).std, 2) == Approx(0.25 + s * s).epsilon(5e-3));
  }
}

TEST_CASE("momentum moments are conserved by free evolution") {
  std::mt19937_64 rng(41);
  const Grid g(-24.0, 24.0, 256);
  WarningCapture quiet;
  for (int trial = 0; trial < 5; ++trial) {
    const WaveFunction wf = testing::random_state(g, rng);
    const ScatteringKernel k = kernel_preset(KernelSpec::gaussian(0.5), default_kernel_step(g));
    const DensityMatrix rho = scatter_reduced(wf, k);
    const auto before = momentum_moments(rho);
    const auto after = momentum_moments(propagate_density(rho, testing::uniform(rng, 0.1, 3.0), 1.0));
    CHECK(after.mean == Approx(before.mean).epsilon(1e-9).scale(1.0));
    CHECK(after.std == Approx(before.std).epsilon(1e-9));
  }
}

TEST_CASE("robertson gap") {
  const Grid g(-20.0, 20.0, 1024);
  CHECK(std::abs(robertson_record(gaussian_packet(g, 0.0, 0.0, 1.0)).robertson_gap) < 1e-4);
  const DensityMatrix scattered =
      scatter_reduced(gaussian_packet(g, 0.0, 0.0, 1.0), kernel_preset(KernelSpec::gaussian(1.0), default_kernel_step(g)));
  CHECK(robertson_record(scattered).robertson_gap > 0.1);
}

TEST_CASE("property: robertson bound on generated states") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = std::size_t{1} << std::uniform_int_distribution<int>(7, 9)(rng);
    const double half = testing::uniform(rng, 8.0, 40.0);
    const Grid g(-half, half, n);
    const WaveFunction wf = testing::random_state(g, rng);
    CHECK(robertson_record(wf).robertson_gap >= -kRobertsonTolerance);
    const double step = default_kernel_step(g);
    const DensityMatrix rho = scatter_reduced(wf, kernel_preset(testing::random_kernel_spec(rng, step), step));
    CHECK(robertson_record(rho).robertson_gap >= -kRobertsonTolerance);
  }
}

TEST_CASE("intensity") {
  const Grid g(-20.0, 20.0, 512);
  const WaveFunction wf = gaussian_packet(g, 0.0, 0.0, 2.0);
  const RealVector I = intensity(density_from_pure(wf));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    REQUIRE(I[j] == Approx(std::exp(-x * x / 8.0) / std::sqrt(8.0 * kPi)).epsilon(1e-10).scale(1e-300));
  }
}

TEST_CASE("far-field two-branch intensity") {
  // Gaussian sources of width s at +-a/2 after time t (m = 1): each spreads to
  // width st = s sqrt(1 + tau^2), tau = t / (2 s^2), with a quadratic phase
  // whose difference between the sources is k x, k = tau a / (2 s^2 (1 + tau^2)).
  const Grid g(-64.0, 64.0, 2048);
  const double a = 2.0, t = 4.0, s = 0.3;
  const double tau = t / (2 * s * s);
  const double st = s * std::sqrt(1 + tau * tau);
  const double k = tau * a / (2 * s * s * (1 + tau * tau));
  auto analytic = [&](double x, double gamma) {
    const double e1 = std::exp(-std::pow(x + a / 2, 2) / (4 * st * st));
    const double e2 = std::exp(-std::pow(x - a / 2, 2) / (4 * st * st));
    return e1 * e1 + e2 * e2 + 2 * gamma * e1 * e2 * std::cos(k * x);
  };
  ComplexMatrix gram(2, 2);
  const Complex w(std::sqrt(0.5), 0.0);
  for (double gamma : {1.0, 0.0}) {
    gram << 1.0, gamma, gamma, 1.0;
    const BranchState bs({{gaussian_packet(g, -a / 2, 0.0, s), w}, {gaussian_packet(g, a / 2, 0.0, s), w}}, gram);
    const RealVector I = intensity(propagate_branches(bs, t, 1.0));
    RealVector expected(g.size());
    double total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) total += (expected[j] = analytic(g.x(j), gamma)) * g.dx();
    double worst = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      worst = std::max(worst, std::abs(I[j] - expected[j] / total));
      peak = std::max(peak, I[j]);
    }
    CHECK(worst < 1e-8 * peak);
    const double v = visibility(I, central_window(g.size(), 0.2));
    if (gamma == 1.0) {
      CHECK(v > 0.99);
    } else {
      CHECK(v < 1e-3);
    }
  }
}

TEST_CASE("visibility of constructed patterns") {
  const Grid g(-32.0, 32.0, 4096);
  RealVector cos2(g.size()), flat(g.size(), 0.3), partial(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double c = std::cos(kPi * g.x(j) / 2.5);
    cos2[j] = c * c;
    partial[j] = 1.0 + 0.5 * std::cos(2 * kPi * g.x(j) / 2.5);
  }
  const IndexWindow w = central_window(g.size(), 0.2);
  CHECK(visibility(cos2, w) == Approx(1.0).epsilon(1e-3));
  CHECK(visibility(flat, w) == Approx(0.0).epsilon(1e-3).scale(1.0));
  CHECK(visibility(partial, w) == Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(visibility(flat, IndexWindow{10, 12}), EstimationError);
  CHECK_THROWS_AS(visibility(flat, IndexWindow{4000, 5000}), EstimationError);
}

TEST_CASE("visibility equals the tag overlap") {
  const Grid g(-64.0, 64.0, 4096);
  const Aperture ap = Aperture::double_slit(0.0, 0.16, 1.0);
  const WaveFunction slits = apply_aperture(gaussian_packet(g, 0.0, 0.0, 1.0), ap).state;
  const double t = 100.0 / (40.0 * kPi);
  WarningCapture quiet;
  for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const BranchState bs =
        entangle_at_slits(slits, ap, kernel_preset(kernel_for_overlap(gamma, 1.0), default_kernel_step(g)));
    const double v = visibility(intensity(propagate_branches(bs, t, 1.0)), central_window(g.size(), 0.2));
    CHECK(std::abs(v - gamma) < 0.02 * std::max(gamma, 1.0));
    if (gamma == 0.0) CHECK(v < 0.02);
  }
}

TEST_CASE("fringe spacing") {
  const Grid g(-32.0, 32.0, 4096);
  RealVector y(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double c = std::cos(kPi * g.x(j) / 2.7);
    y[j] = c * c * std::exp(-g.x(j) * g.x(j) / 400.0);
  }
  CHECK(fringe_spacing(y, g) == Approx(2.7).epsilon(0.01));

  // Far-field double slit, lambda = 0.05, d = 100, a = 1.
  const Grid wide(-64.0, 64.0, 4096);
  const Aperture ap = Aperture::double_slit(0.0, 0.16, 1.0);
  WarningCapture quiet;
  const WaveFunction screen =
      propagate_free(apply_aperture(gaussian_packet(wide, 0.0, 0.0, 1.0), ap).state, 100.0 / (40.0 * kPi), 1.0);
  CHECK(fringe_spacing(screen.density(), wide) == Approx(5.0).epsilon(0.02));

  // A single slit gives no regular fringe train.
  const WaveFunction single = propagate_free(
      apply_aperture(gaussian_packet(wide, 0.0, 0.0, 1.0), Aperture::single_slit(0.0, 0.5)).state,
      100.0 / (40.0 * kPi), 1.0);
  CHECK_THROWS_AS(fringe_spacing(single.density(), wide), EstimationError);

  RealVector flat(g.size(), 1.0);
  CHECK_THROWS_AS(fringe_spacing(flat, g), EstimationError);
}
