#pragma once

#include <random>
#include <span>

#include "gedanken/density.hpp"
#include "gedanken/wavefunction.hpp"

namespace gedanken {

/// State of a K-level system in the eigenbasis of an observable A with
/// eigenvalues a_k. Coefficients are normalized on construction.
class DiscreteState {
 public:
  DiscreteState(ComplexVector coefficients, RealVector eigenvalues);

  std::size_t size() const { return coeffs_.size(); }
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// |psi><psi| in the measured basis.
  ComplexMatrix density() const;

 private:
  ComplexVector coeffs_;
  RealVector eigenvalues_;
};

/// Normal-distributed complex coefficients, normalized.
DiscreteState random_discrete_state(RealVector eigenvalues, std::mt19937_64& rng);

/// Tr(rho A^n) with A = diag(eigenvalues), using explicit matrix powers.
double observable_moment(const ComplexMatrix& rho, std::span<const double> eigenvalues, int power);

/// Standard deviation of A in rho.
double observable_std(const ComplexMatrix& rho, std::span<const double> eigenvalues);

/// Reduced system state after an ideal measurement.
struct MeasuredState {
  ComplexMatrix rho;
  RealVector eigenvalues;

  double moment(int power) const { return observable_moment(rho, eigenvalues, power); }
  double purity() const { return rho.squaredNorm(); }
  RealVector weights() const;
};

/// Couples basis state k to apparatus state alpha_k (orthonormal), forming
/// sum_k psi_k sigma_k alpha_k, and traces out the apparatus. The result is
/// diag(|psi_k|^2).
MeasuredState von_neumann_measure(const DiscreteState& state);

/// Position detection with orthonormal detector tags: keeps |psi(x_j)|^2 on
/// the diagonal and removes every coherence.
DensityMatrix project_position_detection(const WaveFunction& wf);

/// Unnormalized transition probability sin^2(de t / 2) / de^2 (hbar = 1),
/// with the limit t^2/4 at de = 0. Requires t >= 0.
double landau_peierls_probability(double delta_e, double t);

}  // namespace gedanken
