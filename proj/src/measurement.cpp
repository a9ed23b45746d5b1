#include "gedanken/measurement.hpp"

#include <cmath>

#include "gedanken/errors.hpp"

namespace gedanken {

DiscreteState::DiscreteState(ComplexVector coefficients, RealVector eigenvalues)
    : coeffs_(std::move(coefficients)), eigenvalues_(std::move(eigenvalues)) {
  if (coeffs_.size() < 2) throw ConfigurationError("a discrete state needs K >= 2 levels");
  if (coeffs_.size() != eigenvalues_.size()) {
    throw ConfigurationError("coefficient and eigenvalue counts differ");
  }
  double n2 = 0.0;
  for (const Complex& c : coeffs_) n2 += std::norm(c);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw EmptyStateError("discrete state has zero norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (Complex& c : coeffs_) c *= scale;
}

ComplexMatrix DiscreteState::density() const {
  const auto k = static_cast<Eigen::Index>(size());
  Eigen::Map<const Eigen::VectorXcd> psi(coeffs_.data(), k);
  return psi * psi.adjoint();
}

DiscreteState random_discrete_state(RealVector eigenvalues, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector coeffs(eigenvalues.size());
  for (Complex& c : coeffs) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    c = Complex{re, im};
  }
  return DiscreteState(std::move(coeffs), std::move(eigenvalues));
}

double observable_moment(const ComplexMatrix& rho, std::span<const double> eigenvalues,
                         int power) {
  const auto k = static_cast<Eigen::Index>(eigenvalues.size());
  ComplexMatrix a = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) a(i, i) = eigenvalues[static_cast<std::size_t>(i)];
  ComplexMatrix a_pow = ComplexMatrix::Identity(k, k);
  for (int i = 0; i < power; ++i) a_pow = a_pow * a;
  return (rho * a_pow).trace().real();
}

double observable_std(const ComplexMatrix& rho, std::span<const double> eigenvalues) {
  const double m1 = observable_moment(rho, eigenvalues, 1);
  const double m2 = observable_moment(rho, eigenvalues, 2);
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

RealVector MeasuredState::weights() const {
  RealVector w(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) w[static_cast<std::size_t>(i)] = rho(i, i).real();
  return w;
}

MeasuredState von_neumann_measure(const DiscreteState& state) {
  const auto k = static_cast<Eigen::Index>(state.size());
  // Joint amplitude Psi(system, apparatus) = psi_k delta(k, a).
  ComplexMatrix joint = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) joint(i, i) = state.coefficients()[static_cast<std::size_t>(i)];
  // Tracing the apparatus index: rho(k,k') = sum_a Psi(k,a) conj(Psi(k',a)).
  ComplexMatrix rho = joint * joint.adjoint();
  return MeasuredState{std::move(rho),
                       RealVector(state.eigenvalues().begin(), state.eigenvalues().end())};
}

DensityMatrix project_position_detection(const WaveFunction& wf) {
  const auto n = static_cast<Eigen::Index>(wf.size());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) rho(j, j) = std::norm(wf[static_cast<std::size_t>(j)]);
  return DensityMatrix::normalized(wf.grid(), std::move(rho));
}

double landau_peierls_probability(double delta_e, double t) {
  if (!(t >= 0.0)) throw ConfigurationError("transition time must be >= 0");
  const double h = 0.5 * delta_e * t;
  if (std::abs(h) < 1e-4) {
    // sin(h)/h = 1 - h^2/6 + h^4/120 - ...
    const double sinc = 1.0 - h * h / 6.0 + h * h * h * h / 120.0;
    return 0.25 * t * t * sinc * sinc;
  }
  const double s = std::sin(h);
  return s * s / (delta_e * delta_e);
}

}  // namespace gedanken
