#pragma once

#include <span>

#include "gedanken/grid.hpp"

namespace gedanken {

/// Complex amplitude field on a Grid in the position representation,
/// normalized so that sum_j |psi_j|^2 dx = 1.
class WaveFunction {
 public:
  /// Normalizes `amplitudes`; throws EmptyStateError for a zero vector and
  /// ConfigurationError on a length mismatch.
  WaveFunction(Grid grid, ComplexVector amplitudes);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> amplitudes() const { return amp_; }
  Complex operator[](std::size_t j) const { return amp_[j]; }
  std::size_t size() const { return amp_.size(); }

  /// |psi_j|^2, a probability density in x.
  RealVector density() const;

  /// Momentum amplitudes on the centered lattice of grid().
  ComplexVector momentum_amplitudes() const;

  /// Momentum probability density on the centered lattice.
  RealVector momentum_density() const;

 private:
  Grid grid_;
  ComplexVector amp_;
};

/// Discrete squared norm sum_j |a_j|^2 dx.
double norm_squared(const Grid& grid, std::span<const Complex> amplitudes);

/// Inner product <a|b> = sum_j conj(a_j) b_j dx.
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

/// psi(x) ~ exp(-(x-x0)^2/(4 sigma^2) + i p0 x). Requires
/// 4 dx <= sigma <= extent/8.
WaveFunction gaussian_packet(const Grid& grid, double x0, double p0, double sigma);

/// Grid surrogate of a position eigenstate: amplitude 1/sqrt(dx) at one point.
WaveFunction delta_state(const Grid& grid, std::size_t index);

}  // namespace gedanken
