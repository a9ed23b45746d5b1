#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gedanken {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Uniform 1-D position lattice x_j = x_min + j*dx, j = 0..n-1, together with
/// its conjugate momentum lattice p_k = (k - n/2)*dp covering [-pi/dx, pi/dx).
/// Natural units (hbar = 1): dp * dx * n = 2*pi.
class Grid {
 public:
  /// Throws ConfigurationError unless x_max > x_min and n is a power of two >= 16.
  Grid(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }
  double extent() const { return x_max_ - x_min_; }

  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  double p(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dp_;
  }
  double p_max() const { return 0.5 * static_cast<double>(n_) * dp_; }

  RealVector positions() const;
  RealVector momenta() const;

  /// Index of the lattice point closest to x, clamped to the grid.
  std::size_t nearest_index(double x) const;

  bool operator==(const Grid& other) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
  double dp_;
};

Grid make_grid(double x_min, double x_max, std::size_t n_points);

bool is_power_of_two(std::size_t n);

}  // namespace gedanken
