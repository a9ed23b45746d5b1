#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gedanken/grid.hpp"
#include "gedanken/wavefunction.hpp"

namespace gedanken {

using ComplexMatrix = Eigen::MatrixXcd;

/// Position-space density matrix rho(x_j, x_k) on a Grid.
///
/// Continuum normalization: the trace is sum_j rho_jj dx and the purity is
/// sum_jk |rho_jk|^2 dx^2, so a pure state psi psi^* has both equal to one.
/// Construction checks Hermiticity (1e-10 elementwise) and unit trace (1e-10);
/// positivity is checked on demand since it needs an eigen-decomposition.
class DensityMatrix {
 public:
  DensityMatrix(Grid grid, ComplexMatrix rho);

  /// Rescales `rho` to unit trace before validating.
  static DensityMatrix normalized(Grid grid, ComplexMatrix rho);

  const Grid& grid() const { return grid_; }
  const ComplexMatrix& matrix() const { return rho_; }
  Complex operator()(std::size_t j, std::size_t k) const {
    return rho_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }
  std::size_t size() const { return grid_.size(); }

  double trace() const;
  double purity() const;
  RealVector diagonal() const;
  /// Sum of |rho_jk| over j != k.
  double coherence_norm() const;
  /// Smallest eigenvalue of the operator rho*dx. O(n^3).
  double min_eigenvalue() const;
  bool is_positive_semidefinite(double tolerance = 1e-8) const;

 private:
  Grid grid_;
  ComplexMatrix rho_;
};

/// One term of a which-way decomposition: a particle wavefunction and its
/// amplitude weight.
struct Branch {
  WaveFunction state;
  Complex weight;
};

/// Particle branches entangled with tag states. gram(j,k) = <tag_k|tag_j>.
/// The Gram matrix must be Hermitian with unit diagonal and positive
/// semidefinite; otherwise InvalidEntanglementError is thrown.
class BranchState {
 public:
  BranchState(std::vector<Branch> branches, ComplexMatrix gram);

  const std::vector<Branch>& branches() const { return branches_; }
  const ComplexMatrix& gram() const { return gram_; }
  const Grid& grid() const { return branches_.front().state.grid(); }
  std::size_t size() const { return branches_.size(); }

 private:
  std::vector<Branch> branches_;
  ComplexMatrix gram_;
};

DensityMatrix density_from_pure(const WaveFunction& wf);

/// rho(x,x') = sum_jk c_j conj(c_k) psi_j(x) conj(psi_k(x')) G_jk, renormalized
/// to unit trace.
DensityMatrix density_from_branches(const BranchState& bs);

/// Symmetrizes away rounding-level anti-Hermitian parts in place.
void hermitize_in_place(ComplexMatrix& m);

}  // namespace gedanken
