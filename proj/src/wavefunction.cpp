#include "gedanken/wavefunction.hpp"

#include <cmath>
#include <sstream>

#include "gedanken/errors.hpp"
#include "gedanken/spectral.hpp"

namespace gedanken {

double norm_squared(const Grid& grid, std::span<const Complex> amplitudes) {
  double sum = 0.0;
  for (const Complex& a : amplitudes) sum += std::norm(a);
  return sum * grid.dx();
}

WaveFunction::WaveFunction(Grid grid, ComplexVector amplitudes)
    : grid_(grid), amp_(std::move(amplitudes)) {
  if (amp_.size() != grid_.size()) {
    throw ConfigurationError("amplitude array length does not match the grid");
  }
  const double n2 = norm_squared(grid_, amp_);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw EmptyStateError("wavefunction has zero (or non-finite) norm");
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (Complex& a : amp_) a *= scale;
}

RealVector WaveFunction::density() const {
  RealVector rho(amp_.size());
  for (std::size_t j = 0; j < amp_.size(); ++j) rho[j] = std::norm(amp_[j]);
  return rho;
}

ComplexVector WaveFunction::momentum_amplitudes() const {
  return spectral::to_momentum(grid_, amp_);
}

RealVector WaveFunction::momentum_density() const {
  const ComplexVector phi = momentum_amplitudes();
  RealVector out(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) out[k] = std::norm(phi[k]);
  return out;
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) throw ConfigurationError("inner product across different grids");
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) sum += std::conj(a[j]) * b[j];
  return sum * a.grid().dx();
}

WaveFunction gaussian_packet(const Grid& grid, double x0, double p0, double sigma) {
  if (!(sigma >= 4.0 * grid.dx())) {
    std::ostringstream msg;
    msg << "packet width sigma=" << sigma << " is not resolved by the grid (need >= 4*dx = "
        << 4.0 * grid.dx() << ")";
    throw ConfigurationError(msg.str());
  }
  if (!(sigma <= grid.extent() / 8.0)) {
    std::ostringstream msg;
    msg << "packet width sigma=" << sigma << " is too wide for the grid (need <= extent/8 = "
        << grid.extent() / 8.0 << ")";
    throw ConfigurationError(msg.str());
  }
  ComplexVector amp(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = grid.x(j) - x0;
    amp[j] = std::exp(-u * u / (4.0 * sigma * sigma)) * std::polar(1.0, p0 * grid.x(j));
  }
  return WaveFunction(grid, std::move(amp));
}

WaveFunction delta_state(const Grid& grid, std::size_t index) {
  if (index >= grid.size()) throw ConfigurationError("delta_state index outside the grid");
  ComplexVector amp(grid.size(), Complex{0.0, 0.0});
  amp[index] = 1.0 / std::sqrt(grid.dx());
  return WaveFunction(grid, std::move(amp));
}

}  // namespace gedanken
