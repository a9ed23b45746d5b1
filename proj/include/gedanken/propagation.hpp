#pragma once

#include <span>
#include <vector>

#include "gedanken/density.hpp"
#include "gedanken/wavefunction.hpp"

namespace gedanken {

enum class ApertureKind { single_slit, double_slit };

/// Hard-edged slit mask. A grid point is open when it lies within w/2 of a
/// slit center. Double slits are symmetric about `center` with
/// center-to-center separation `separation`.
struct Aperture {
  ApertureKind kind = ApertureKind::single_slit;
  double center = 0.0;
  double width = 0.0;
  double separation = 0.0;

  static Aperture single_slit(double center, double width);
  static Aperture double_slit(double center, double width, double separation);

  std::vector<double> slit_centers() const;
  bool is_open(double x, double dx) const;
  /// Throws ConfigurationError unless w >= 4 dx, separation > w for double
  /// slits, and every slit lies inside the grid.
  void validate(const Grid& grid) const;
};

struct Transmitted {
  WaveFunction state;   ///< renormalized, supported on the open region
  double transmission;  ///< probability of passing before renormalization
};

/// Multiplies by the aperture indicator and renormalizes (post-selection on
/// passage). Throws EmptyStateError when nothing is transmitted.
Transmitted apply_aperture(const WaveFunction& wf, const Aperture& aperture);

/// Free evolution exp(-i p^2 t / 2m), applied spectrally. Emits a warning
/// when the evolved state carries more than 1e-6 probability in the
/// boundary strips, where the periodic lattice wraps around.
WaveFunction propagate_free(const WaveFunction& wf, double t, double mass);

/// rho -> U rho U^dagger with the same free propagator on both indices.
DensityMatrix propagate_density(const DensityMatrix& rho, double t, double mass);

/// Evolves each branch; tag overlaps are unchanged by the tags' own unitary
/// evolution.
BranchState propagate_branches(const BranchState& bs, double t, double mass);

/// Probability in the outer n/16 points at each end of the grid.
double boundary_probability(const Grid& grid, std::span<const double> density);
double boundary_probability(const WaveFunction& wf);
double boundary_probability(const DensityMatrix& rho);

inline constexpr double kBoundaryLeakThreshold = 1e-6;

}  // namespace gedanken
