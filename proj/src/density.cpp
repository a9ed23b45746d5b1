#include "gedanken/density.hpp"

#include <cmath>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-10;

double max_anti_hermitian(const ComplexMatrix& m) {
  double worst = 0.0;
  const Eigen::Index n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = k; j < n; ++j) {
      worst = std::max(worst, std::abs(m(j, k) - std::conj(m(k, j))));
    }
  }
  return worst;
}

double raw_trace(const ComplexMatrix& m, double dx) { return m.diagonal().real().sum() * dx; }

}  // namespace

void hermitize_in_place(ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    m(k, k) = Complex{m(k, k).real(), 0.0};
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const Complex avg = 0.5 * (m(j, k) + std::conj(m(k, j)));
      m(j, k) = avg;
      m(k, j) = std::conj(avg);
    }
  }
}

DensityMatrix::DensityMatrix(Grid grid, ComplexMatrix rho) : grid_(grid), rho_(std::move(rho)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (rho_.rows() != n || rho_.cols() != n) {
    throw ConfigurationError("density matrix shape does not match the grid");
  }
  const double asym = max_anti_hermitian(rho_);
  if (!(asym <= kHermitianTolerance)) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (max deviation " << asym << ")";
    throw InvariantViolation(msg.str());
  }
  const double tr = raw_trace(rho_, grid_.dx());
  if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1";
    throw InvariantViolation(msg.str());
  }
}

DensityMatrix DensityMatrix::normalized(Grid grid, ComplexMatrix rho) {
  const double tr = raw_trace(rho, grid.dx());
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw EmptyStateError("density matrix has non-positive trace");
  }
  rho /= tr;
  return DensityMatrix(grid, std::move(rho));
}

double DensityMatrix::trace() const { return raw_trace(rho_, grid_.dx()); }

double DensityMatrix::purity() const {
  return rho_.squaredNorm() * grid_.dx() * grid_.dx();
}

RealVector DensityMatrix::diagonal() const {
  RealVector d(size());
  for (std::size_t j = 0; j < size(); ++j) d[j] = (*this)(j, j).real();
  return d;
}

double DensityMatrix::coherence_norm() const {
  double sum = 0.0;
  const Eigen::Index n = rho_.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != k) sum += std::abs(rho_(j, k));
    }
  }
  return sum;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_ * grid_.dx(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_positive_semidefinite(double tolerance) const {
  return min_eigenvalue() >= -tolerance;
}

BranchState::BranchState(std::vector<Branch> branches, ComplexMatrix gram)
    : branches_(std::move(branches)), gram_(std::move(gram)) {
  if (branches_.empty()) throw ConfigurationError("branch state needs at least one branch");
  const auto k = static_cast<Eigen::Index>(branches_.size());
  if (gram_.rows() != k || gram_.cols() != k) {
    throw InvalidEntanglementError("Gram matrix shape does not match the number of branches");
  }
  for (const Branch& b : branches_) {
    if (!(b.state.grid() == branches_.front().state.grid())) {
      throw ConfigurationError("all branches must share one grid");
    }
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(gram_(i, i) - 1.0) > 1e-10) {
      throw InvalidEntanglementError("tag states must be normalized (Gram diagonal != 1)");
    }
  }
  if (max_anti_hermitian(gram_) > 1e-10) {
    throw InvalidEntanglementError("Gram matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidEntanglementError("Gram matrix is not positive semidefinite");
  }
}

DensityMatrix density_from_pure(const WaveFunction& wf) {
  const auto n = static_cast<Eigen::Index>(wf.size());
  Eigen::Map<const Eigen::VectorXcd> psi(wf.amplitudes().data(), n);
  ComplexMatrix rho = psi * psi.adjoint();
  hermitize_in_place(rho);
  return DensityMatrix::normalized(wf.grid(), std::move(rho));
}

DensityMatrix density_from_branches(const BranchState& bs) {
  const auto n = static_cast<Eigen::Index>(bs.grid().size());
  const auto k = static_cast<Eigen::Index>(bs.size());
  ComplexMatrix columns(n, k);
  for (Eigen::Index b = 0; b < k; ++b) {
    const Branch& branch = bs.branches()[static_cast<std::size_t>(b)];
    Eigen::Map<const Eigen::VectorXcd> psi(branch.state.amplitudes().data(), n);
    columns.col(b) = branch.weight * psi;
  }
  const ComplexMatrix weighted = columns * bs.gram();
  ComplexMatrix rho(n, n);
  rho.noalias() = weighted * columns.adjoint();
  hermitize_in_place(rho);
  return DensityMatrix::normalized(bs.grid(), std::move(rho));
}

}  // namespace gedanken
