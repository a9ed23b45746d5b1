#include "gedanken/propagation.hpp"

#include <cmath>
#include <sstream>

#include "gedanken/diagnostics.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/spectral.hpp"

namespace gedanken {

namespace {

void check_evolution_parameters(double t, double mass) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ConfigurationError("propagation time must be finite and >= 0");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigurationError("mass must be finite and > 0");
  }
}

ComplexVector free_phases(const Grid& grid, double t, double mass) {
  ComplexVector phase(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = grid.p(k);
    phase[k] = std::polar(1.0, -p * p * t / (2.0 * mass));
  }
  return phase;
}

void warn_on_leak(double leak, const char* what) {
  if (leak > kBoundaryLeakThreshold) {
    std::ostringstream msg;
    msg << what << ": boundary probability " << leak << " exceeds " << kBoundaryLeakThreshold
        << "; periodic wrap-around may contaminate the result";
    emit_warning(msg.str());
  }
}

}  // namespace

Aperture Aperture::single_slit(double center, double width) {
  return Aperture{ApertureKind::single_slit, center, width, 0.0};
}

Aperture Aperture::double_slit(double center, double width, double separation) {
  return Aperture{ApertureKind::double_slit, center, width, separation};
}

std::vector<double> Aperture::slit_centers() const {
  if (kind == ApertureKind::single_slit) return {center};
  return {center - 0.5 * separation, center + 0.5 * separation};
}

bool Aperture::is_open(double x, double dx) const {
  const double half = 0.5 * width + 1e-9 * dx;
  for (double c : slit_centers()) {
    if (std::abs(x - c) <= half) return true;
  }
  return false;
}

void Aperture::validate(const Grid& grid) const {
  if (!(width >= 4.0 * grid.dx())) {
    std::ostringstream msg;
    msg << "slit width " << width << " is below 4*dx = " << 4.0 * grid.dx();
    throw ConfigurationError(msg.str());
  }
  if (kind == ApertureKind::double_slit && !(separation > width)) {
    throw ConfigurationError("double-slit separation must exceed the slit width");
  }
  for (double c : slit_centers()) {
    if (c - 0.5 * width <= grid.x_min() || c + 0.5 * width >= grid.x_max()) {
      throw ConfigurationError("aperture extends outside the grid");
    }
  }
}

Transmitted apply_aperture(const WaveFunction& wf, const Aperture& aperture) {
  const Grid& grid = wf.grid();
  aperture.validate(grid);
  ComplexVector amp(wf.amplitudes().begin(), wf.amplitudes().end());
  for (std::size_t j = 0; j < amp.size(); ++j) {
    if (!aperture.is_open(grid.x(j), grid.dx())) amp[j] = Complex{0.0, 0.0};
  }
  const double transmission = norm_squared(grid, amp);
  if (!(transmission > 0.0)) {
    throw EmptyStateError("aperture transmits nothing of the incident state");
  }
  return Transmitted{WaveFunction(grid, std::move(amp)), transmission};
}

WaveFunction propagate_free(const WaveFunction& wf, double t, double mass) {
  check_evolution_parameters(t, mass);
  if (t == 0.0) return wf;
  const Grid& grid = wf.grid();
  ComplexVector amp(wf.amplitudes().begin(), wf.amplitudes().end());
  const ComplexVector phase = free_phases(grid, t, mass);
  spectral::apply_momentum_diagonal(grid, amp.data(), 1, phase);
  WaveFunction out(grid, std::move(amp));
  warn_on_leak(boundary_probability(out), "free propagation");
  return out;
}

DensityMatrix propagate_density(const DensityMatrix& rho, double t, double mass) {
  check_evolution_parameters(t, mass);
  if (t == 0.0) return rho;
  const Grid& grid = rho.grid();
  const ComplexVector phase = free_phases(grid, t, mass);
  // B = U (U rho)^dagger equals U rho U^dagger for Hermitian rho.
  ComplexMatrix m = rho.matrix();
  spectral::apply_momentum_diagonal(grid, m.data(), grid.size(), phase);
  m.adjointInPlace();
  spectral::apply_momentum_diagonal(grid, m.data(), grid.size(), phase);
  hermitize_in_place(m);
  DensityMatrix out = DensityMatrix::normalized(grid, std::move(m));
  warn_on_leak(boundary_probability(out), "density propagation");
  return out;
}

BranchState propagate_branches(const BranchState& bs, double t, double mass) {
  std::vector<Branch> evolved;
  evolved.reserve(bs.size());
  for (const Branch& b : bs.branches()) {
    evolved.push_back(Branch{propagate_free(b.state, t, mass), b.weight});
  }
  return BranchState(std::move(evolved), bs.gram());
}

double boundary_probability(const Grid& grid, std::span<const double> density) {
  const std::size_t n = grid.size();
  const std::size_t strip = n / 16;
  double sum = 0.0;
  for (std::size_t j = 0; j < strip; ++j) sum += density[j] + density[n - 1 - j];
  return sum * grid.dx();
}

double boundary_probability(const WaveFunction& wf) {
  const RealVector d = wf.density();
  return boundary_probability(wf.grid(), d);
}

double boundary_probability(const DensityMatrix& rho) {
  const RealVector d = rho.diagonal();
  return boundary_probability(rho.grid(), d);
}

}  // namespace gedanken
