#pragma once

#include <cstddef>
#include <span>

#include "gedanken/grid.hpp"

// Discrete Fourier machinery shared by the propagation and observables code.
// Momentum amplitudes are stored on the centered lattice of Grid::p(k) with
// the continuum normalization phi(p) = dx/sqrt(2 pi) * sum_j psi_j exp(-i p x_j),
// so that sum_k |phi_k|^2 dp = sum_j |psi_j|^2 dx.
namespace gedanken::spectral {

enum class Direction { forward, inverse };

/// Unnormalized in-place DFT of `batches` contiguous sequences of `length`.
/// forward uses exp(-2 pi i jk/n), inverse exp(+2 pi i jk/n).
void dft(Complex* data, std::size_t length, std::size_t batches, Direction direction);

ComplexVector to_momentum(const Grid& grid, std::span<const Complex> psi);
ComplexVector to_position(const Grid& grid, std::span<const Complex> phi);

/// Multiplies each of `batches` position-space columns (contiguous, length
/// grid.size()) by the momentum-diagonal operator with entries factor[k].
void apply_momentum_diagonal(const Grid& grid, Complex* columns, std::size_t batches,
                             std::span<const Complex> factor);

}  // namespace gedanken::spectral
