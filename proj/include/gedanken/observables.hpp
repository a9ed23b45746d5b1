#pragma once

#include <cstddef>
#include <span>

#include "gedanken/density.hpp"
#include "gedanken/wavefunction.hpp"

namespace gedanken {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

/// Position/momentum means and standard deviations, plus the Robertson gap
/// std_x * std_p - 1/2 (hbar = 1, <[x,p]> = i).
struct UncertaintyRecord {
  double mean_x = 0.0;
  double std_x = 0.0;
  double mean_p = 0.0;
  double std_p = 0.0;
  double robertson_gap = 0.0;
};

inline constexpr double kRobertsonTolerance = 1e-6;

/// Mean and std of `axis` under the (unnormalized) weights.
Moments distribution_moments(std::span<const double> axis, std::span<const double> weights);

Moments position_moments(const DensityMatrix& rho);
Moments position_moments(const WaveFunction& wf);

/// Momentum marginal on the centered lattice: the diagonal of the double
/// spectral transform of rho, evaluated through wrapped diagonal sums and a
/// single FFT (O(n^2) rather than a full 2-D transform).
RealVector momentum_density(const DensityMatrix& rho);

Moments momentum_moments(const DensityMatrix& rho);
Moments momentum_moments(const WaveFunction& wf);

/// Throws InvariantViolation if the gap is below -1e-6.
UncertaintyRecord robertson_record(const DensityMatrix& rho);
UncertaintyRecord robertson_record(const WaveFunction& wf);

/// Screen intensity rho(x_j, x_j); sums to 1/dx.
RealVector intensity(const DensityMatrix& rho);

/// Diagonal of density_from_branches(bs) without forming the matrix.
RealVector intensity(const BranchState& bs);

/// Half-open index range [begin, end).
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Central `fraction` of an array of length n.
IndexWindow central_window(std::size_t n, double fraction);

/// Fringe visibility (I_max - I_min)/(I_max + I_min) inside `window`.
/// Every local maximum bracketed by minima is compared with the lower
/// envelope at its position (quadratic interpolation through the nearest
/// minima), and likewise every bracketed minimum with the upper envelope;
/// the result is the mean over these pairs. Extrema smaller than 1% of the
/// window's range are ignored. A window without fringes gives 0.
/// Throws EstimationError for windows shorter than 3 samples or outside I.
double visibility(std::span<const double> intensity, IndexWindow window);

struct FringeEstimate {
  double spacing = 0.0;
  std::size_t maxima = 0;
  /// Successive spacings agree within 15% and the maxima heights within a
  /// factor of 5, as for two-beam fringes under a slowly varying envelope.
  bool regular = false;
};

/// Estimates the period from the median gap between maxima, restricts to the
/// central region where the one-period moving average stays above half its
/// peak, divides that envelope out and returns the mean spacing of the
/// remaining maxima (two passes). Extrema are detected with a 1% hysteresis
/// so lattice-scale ripple is ignored.
/// Throws EstimationError when fewer than 3 maxima are found.
FringeEstimate estimate_fringes(std::span<const double> intensity, const Grid& grid);

/// Two-slit fringe spacing. Throws EstimationError when fewer than 3 maxima
/// are found or when the maxima are not a regular fringe train (e.g. a
/// single-slit pattern).
double fringe_spacing(std::span<const double> intensity, const Grid& grid);

}  // namespace gedanken
