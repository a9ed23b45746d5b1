#include "gedanken/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace gedanken::spectral {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(Complex* data, std::size_t length, std::size_t batches, Direction direction) {
    const int n = static_cast<int>(length);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    const int sign = direction == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    // FFTW_UNALIGNED keeps the chosen algorithm independent of buffer
    // alignment, so results are bit-reproducible across runs.
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_many_dft(1, &n, static_cast<int>(batches), buf, nullptr, 1, n, buf,
                               nullptr, 1, n, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

double alternating(std::size_t j) { return (j & 1U) != 0U ? -1.0 : 1.0; }

}  // namespace

void dft(Complex* data, std::size_t length, std::size_t batches, Direction direction) {
  Plan plan(data, length, batches, direction);
  plan.execute();
}

ComplexVector to_momentum(const Grid& grid, std::span<const Complex> psi) {
  const std::size_t n = grid.size();
  ComplexVector phi(n);
  for (std::size_t j = 0; j < n; ++j) phi[j] = psi[j] * alternating(j);
  dft(phi.data(), n, 1, Direction::forward);
  const double scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < n; ++k) {
    phi[k] *= scale * std::polar(1.0, -grid.p(k) * grid.x_min());
  }
  return phi;
}

ComplexVector to_position(const Grid& grid, std::span<const Complex> phi) {
  const std::size_t n = grid.size();
  ComplexVector psi(n);
  for (std::size_t k = 0; k < n; ++k) psi[k] = phi[k] * std::polar(1.0, grid.p(k) * grid.x_min());
  dft(psi.data(), n, 1, Direction::inverse);
  const double scale = grid.dp() / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= scale * alternating(j);
  return psi;
}

void apply_momentum_diagonal(const Grid& grid, Complex* columns, std::size_t batches,
                             std::span<const Complex> factor) {
  const std::size_t n = grid.size();
  const std::size_t total = n * batches;
  for (std::size_t i = 0; i < total; ++i) columns[i] *= alternating(i % n);
  dft(columns, n, batches, Direction::forward);
  for (std::size_t b = 0; b < batches; ++b) {
    Complex* col = columns + b * n;
    for (std::size_t k = 0; k < n; ++k) col[k] *= factor[k];
  }
  dft(columns, n, batches, Direction::inverse);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < total; ++i) columns[i] *= alternating(i % n) * inv_n;
}

}  // namespace gedanken::spectral
