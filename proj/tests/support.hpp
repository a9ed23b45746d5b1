#pragma once

// Shared generators and oracles for the test suites.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "gedanken/grid.hpp"
#include "gedanken/scattering.hpp"
#include "gedanken/wavefunction.hpp"

namespace testing {

using gedanken::Complex;
using gedanken::ComplexVector;
using gedanken::Grid;
using gedanken::RealVector;
using gedanken::WaveFunction;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Composite Simpson rule over [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 20000) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Random smooth state: a superposition of 1-3 Gaussian packets with random
/// centres, momenta, widths and phases, kept well inside the grid.
inline WaveFunction random_state(const Grid& grid, std::mt19937_64& rng) {
  const double span = grid.extent();
  const double sigma_lo = 4.0 * grid.dx();
  const double sigma_hi = span / 16.0;
  const int packets = std::uniform_int_distribution<int>(1, 3)(rng);
  ComplexVector amp(grid.size(), Complex{0.0, 0.0});
  for (int k = 0; k < packets; ++k) {
    const double sigma = uniform(rng, std::max(sigma_lo, 0.02 * span), sigma_hi);
    const double x0 = uniform(rng, -0.15 * span, 0.15 * span) + 0.5 * (grid.x_min() + grid.x_max());
    const double p0 = uniform(rng, -0.2, 0.2) * grid.p_max();
    const Complex c = std::polar(uniform(rng, 0.3, 1.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const WaveFunction g = gedanken::gaussian_packet(grid, x0, p0, sigma);
    for (std::size_t j = 0; j < grid.size(); ++j) amp[j] += c * g[j];
  }
  return WaveFunction(grid, std::move(amp));
}

/// Random kernel preset resolvable on the lattice `step`.
inline gedanken::KernelSpec random_kernel_spec(std::mt19937_64& rng, double step) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return gedanken::KernelSpec::identity();
    case 1: return gedanken::KernelSpec::gaussian(uniform(rng, 4.0, 40.0) * step);
    case 2: return gedanken::KernelSpec::boxcar(uniform(rng, 8.0, 120.0) * step);
    default: {
      const double eps = uniform(rng, 0.1, 1.2);
      const double width = uniform(rng, 8.0, 120.0) * step;
      return gedanken::KernelSpec::lens_aperture(4.0 * std::numbers::pi * std::sin(eps) / width,
                                                 eps);
    }
  }
}

inline double max_abs_diff(const RealVector& a, const RealVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
