#include "gedanken/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    std::ostringstream msg;
    msg << "grid extent must satisfy x_max > x_min (got [" << x_min << ", " << x_max << "])";
    throw ConfigurationError(msg.str());
  }
  if (!is_power_of_two(n_points)) {
    throw ConfigurationError("n_points must be a power of two (got " +
                             std::to_string(n_points) + ")");
  }
  if (n_points < 16) {
    throw ConfigurationError("n_points must be at least 16 (got " + std::to_string(n_points) +
                             ")");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points);
  dp_ = 2.0 * std::numbers::pi / (static_cast<double>(n_points) * dx_);
}

RealVector Grid::positions() const {
  RealVector xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

RealVector Grid::momenta() const {
  RealVector ps(n_);
  for (std::size_t k = 0; k < n_; ++k) ps[k] = p(k);
  return ps;
}

std::size_t Grid::nearest_index(double xv) const {
  const double j = std::round((xv - x_min_) / dx_);
  if (j <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(j), n_ - 1);
}

Grid make_grid(double x_min, double x_max, std::size_t n_points) {
  return Grid(x_min, x_max, n_points);
}

}  // namespace gedanken
