#include "gedanken/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gedanken/errors.hpp"
#include "gedanken/spectral.hpp"

namespace gedanken {

Moments distribution_moments(std::span<const double> axis, std::span<const double> weights) {
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    mass += weights[i];
    first += weights[i] * axis[i];
  }
  const double mean = first / mass;
  double second = 0.0;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double d = axis[i] - mean;
    second += weights[i] * d * d;
  }
  return Moments{mean, std::sqrt(std::max(0.0, second / mass))};
}

Moments position_moments(const DensityMatrix& rho) {
  const RealVector w = rho.diagonal();
  const RealVector x = rho.grid().positions();
  return distribution_moments(x, w);
}

Moments position_moments(const WaveFunction& wf) {
  const RealVector w = wf.density();
  const RealVector x = wf.grid().positions();
  return distribution_moments(x, w);
}

RealVector momentum_density(const DensityMatrix& rho) {
  const Grid& grid = rho.grid();
  const std::size_t n = grid.size();
  // S_m = sum_j rho(j, j - m mod n); rho(p_k,p_k) is the DFT of (-1)^m S_m.
  ComplexVector wrapped(n, Complex{0.0, 0.0});
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t l = 0; l < n; ++l) {
    const Complex* col = m.col(static_cast<Eigen::Index>(l)).data();
    for (std::size_t j = 0; j < l; ++j) wrapped[j + n - l] += col[j];
    for (std::size_t j = l; j < n; ++j) wrapped[j - l] += col[j];
  }
  for (std::size_t s = 1; s < n; s += 2) wrapped[s] = -wrapped[s];
  spectral::dft(wrapped.data(), n, 1, spectral::Direction::forward);
  const double scale = grid.dx() * grid.dx() / (2.0 * std::numbers::pi);
  RealVector out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = wrapped[k].real() * scale;
  return out;
}

Moments momentum_moments(const DensityMatrix& rho) {
  const RealVector w = momentum_density(rho);
  const RealVector p = rho.grid().momenta();
  return distribution_moments(p, w);
}

Moments momentum_moments(const WaveFunction& wf) {
  const RealVector w = wf.momentum_density();
  const RealVector p = wf.grid().momenta();
  return distribution_moments(p, w);
}

namespace {

UncertaintyRecord assemble(const Moments& x, const Moments& p) {
  UncertaintyRecord r{x.mean, x.std, p.mean, p.std, x.std * p.std - 0.5};
  if (!(r.robertson_gap >= -kRobertsonTolerance)) {
    std::ostringstream msg;
    msg << "Robertson bound violated: std_x*std_p - 1/2 = " << r.robertson_gap;
    throw InvariantViolation(msg.str());
  }
  return r;
}

}  // namespace

UncertaintyRecord robertson_record(const DensityMatrix& rho) {
  return assemble(position_moments(rho), momentum_moments(rho));
}

UncertaintyRecord robertson_record(const WaveFunction& wf) {
  return assemble(position_moments(wf), momentum_moments(wf));
}

RealVector intensity(const DensityMatrix& rho) {
  RealVector d = rho.diagonal();
  for (double v : d) {
    if (v < -1e-12) throw InvariantViolation("negative intensity on the density diagonal");
  }
  return d;
}

RealVector intensity(const BranchState& bs) {
  const Grid& grid = bs.grid();
  const std::size_t n = grid.size();
  const std::size_t k = bs.size();
  const ComplexMatrix& gram = bs.gram();
  RealVector out(n, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    const Branch& ba = bs.branches()[a];
    for (std::size_t b = 0; b < k; ++b) {
      const Branch& bb = bs.branches()[b];
      const Complex g = ba.weight * std::conj(bb.weight) *
                        gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      for (std::size_t j = 0; j < n; ++j) {
        out[j] += (g * ba.state[j] * std::conj(bb.state[j])).real();
      }
    }
  }
  double total = 0.0;
  for (double v : out) total += v;
  total *= grid.dx();
  if (!(total > 0.0)) throw EmptyStateError("branch state has zero intensity");
  for (double& v : out) {
    if (v < -1e-12 * total) throw InvariantViolation("negative intensity from branch state");
    v /= total;
  }
  return out;
}

IndexWindow central_window(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigurationError("window fraction must lie in (0, 1]");
  }
  const auto half = static_cast<std::size_t>(std::llround(0.5 * fraction * static_cast<double>(n)));
  const std::size_t mid = n / 2;
  return IndexWindow{mid - std::min(half, mid), std::min(n, mid + half)};
}

namespace {

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

// Alternating extrema in [first, last] with hysteresis: a maximum counts
// once the signal has dropped `rel` times the local range below it, and
// vice versa. Sub-threshold ripple (e.g. lattice-scale aliasing) is ignored.
// Extrema on the range ends are dropped.
Extrema find_extrema(std::span<const double> y, std::size_t first, std::size_t last,
                     double rel = 0.01) {
  Extrema e;
  if (y.size() < 3 || first >= last) return e;
  last = std::min(last, y.size() - 1);
  const auto [lo_it, hi_it] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(first),
                                                  y.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const double delta = rel * (*hi_it - *lo_it);
  if (!(delta > 0.0)) return e;

  std::size_t imax = first, imin = first;
  bool seek_max = true;
  auto keep = [&](std::vector<std::size_t>& v, std::size_t i) {
    if (i != first && i != last) v.push_back(i);
  };
  for (std::size_t i = first; i <= last; ++i) {
    if (y[i] > y[imax]) imax = i;
    if (y[i] < y[imin]) imin = i;
    if (seek_max && y[i] < y[imax] - delta) {
      keep(e.maxima, imax);
      seek_max = false;
      imin = i;
    } else if (!seek_max && y[i] > y[imin] + delta) {
      keep(e.minima, imin);
      seek_max = true;
      imax = i;
    }
  }
  return e;
}

// Envelope through the opposite extrema `nodes`, evaluated at `at`; nodes
// must bracket `at`. Uses the bracketing pair plus the next nearest node.
double envelope_at(std::span<const double> y, const std::vector<std::size_t>& nodes,
                   std::size_t right, double at) {
  const std::size_t left = right - 1;
  std::vector<std::size_t> pick{nodes[left], nodes[right]};
  const bool has_before = left > 0;
  const bool has_after = right + 1 < nodes.size();
  if (has_before && has_after) {
    const double before = at - static_cast<double>(nodes[left - 1]);
    const double after = static_cast<double>(nodes[right + 1]) - at;
    pick.push_back(before <= after ? nodes[left - 1] : nodes[right + 1]);
  } else if (has_before) {
    pick.push_back(nodes[left - 1]);
  } else if (has_after) {
    pick.push_back(nodes[right + 1]);
  }
  double value = 0.0;
  for (std::size_t a = 0; a < pick.size(); ++a) {
    double basis = 1.0;
    for (std::size_t b = 0; b < pick.size(); ++b) {
      if (a == b) continue;
      basis *= (at - static_cast<double>(pick[b])) /
               (static_cast<double>(pick[a]) - static_cast<double>(pick[b]));
    }
    value += basis * y[pick[a]];
  }
  return value;
}

// For each extremum in `probes` bracketed by `nodes`, the local contrast.
void accumulate_contrast(std::span<const double> y, const std::vector<std::size_t>& probes,
                         const std::vector<std::size_t>& nodes, bool probes_are_maxima,
                         double& sum, std::size_t& count) {
  for (std::size_t probe : probes) {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), probe);
    if (it == nodes.begin() || it == nodes.end()) continue;
    const auto right = static_cast<std::size_t>(it - nodes.begin());
    const double env = envelope_at(y, nodes, right, static_cast<double>(probe));
    double hi = probes_are_maxima ? y[probe] : env;
    double lo = probes_are_maxima ? env : y[probe];
    lo = std::max(lo, 0.0);
    hi = std::max(hi, lo);
    if (hi + lo <= 0.0) continue;
    sum += (hi - lo) / (hi + lo);
    ++count;
  }
}

}  // namespace

double visibility(std::span<const double> y, IndexWindow window) {
  if (window.end > y.size() || window.begin >= window.end) {
    throw EstimationError("visibility window lies outside the intensity array");
  }
  if (window.size() < 3) throw EstimationError("visibility window is too narrow");
  const Extrema e = find_extrema(y, window.begin, window.end - 1);
  if (e.maxima.empty() || e.minima.empty()) return 0.0;

  double sum = 0.0;
  std::size_t count = 0;
  accumulate_contrast(y, e.maxima, e.minima, true, sum, count);
  accumulate_contrast(y, e.minima, e.maxima, false, sum, count);
  if (count == 0) {
    // One unbracketed max/min pair: plain contrast of the pair.
    const double hi = y[e.maxima.front()];
    const double lo = std::max(0.0, y[e.minima.front()]);
    return hi + lo > 0.0 ? std::clamp((hi - lo) / (hi + lo), 0.0, 1.0) : 0.0;
  }
  return std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
}

namespace {

RealVector moving_average(std::span<const double> y, std::size_t length) {
  const std::size_t n = y.size();
  const std::size_t half = length / 2;
  RealVector prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

// Vertex of a least-squares parabola through y[i-h .. i+h].
double refined_peak(std::span<const double> y, std::size_t i, std::size_t h) {
  h = std::min({h, i, y.size() - 1 - i});
  if (h == 0) return static_cast<double>(i);
  double s2 = 0.0, s4 = 0.0, t0 = 0.0, t1 = 0.0, t2 = 0.0;
  for (std::size_t k = 0; k <= 2 * h; ++k) {
    const double x = static_cast<double>(k) - static_cast<double>(h);
    const double v = y[i - h + k];
    s2 += x * x;
    s4 += x * x * x * x;
    t0 += v;
    t1 += x * v;
    t2 += x * x * v;
  }
  const double s0 = static_cast<double>(2 * h + 1);
  const double b = t1 / s2;
  const double c = (s0 * t2 - s2 * t0) / (s0 * s4 - s2 * s2);
  if (!(c < 0.0)) return static_cast<double>(i);
  const double shift = -b / (2.0 * c);
  if (std::abs(shift) > static_cast<double>(h)) return static_cast<double>(i);
  return static_cast<double>(i) + shift;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

FringeEstimate estimate_fringes(std::span<const double> y, const Grid& grid) {
  if (y.size() != grid.size()) {
    throw EstimationError("intensity array does not match the grid");
  }
  const std::size_t n = y.size();
  const double peak = *std::max_element(y.begin(), y.end());
  if (!(peak > 0.0)) throw EstimationError("intensity pattern is empty");

  // Period guess from the strong maxima (at least a quarter of the peak).
  std::vector<std::size_t> strong;
  for (std::size_t i : find_extrema(y, 0, n - 1).maxima) {
    if (y[i] >= 0.25 * peak) strong.push_back(i);
  }
  if (strong.size() < 3) throw EstimationError("fewer than 3 strong maxima in the pattern");
  std::vector<double> gaps;
  for (std::size_t i = 1; i < strong.size(); ++i) {
    gaps.push_back(static_cast<double>(strong[i] - strong[i - 1]));
  }
  double period = median(gaps);

  // Central region: where the one-period envelope stays above half its peak.
  const RealVector envelope =
      moving_average(y, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(period))));
  const auto top = static_cast<std::size_t>(
      std::max_element(envelope.begin(), envelope.end()) - envelope.begin());
  std::size_t begin = top;
  std::size_t end = top;
  while (begin > 1 && envelope[begin - 1] >= 0.5 * envelope[top]) --begin;
  while (end + 2 < n && envelope[end + 1] >= 0.5 * envelope[top]) ++end;

  const Extrema raw = find_extrema(y, begin, end);
  if (raw.maxima.size() < 3) {
    throw EstimationError("fewer than 3 maxima in the central part of the pattern");
  }

  std::vector<double> peaks;
  for (int pass = 0; pass < 2; ++pass) {
    auto length = static_cast<std::size_t>(std::llround(period));
    length = std::max<std::size_t>(length, 1);
    const RealVector avg = moving_average(y, length);
    RealVector flat(n);
    for (std::size_t i = 0; i < n; ++i) flat[i] = avg[i] > 0.0 ? y[i] / avg[i] : 0.0;
    const Extrema e = find_extrema(flat, begin, end);
    peaks.clear();
    const std::size_t half = std::max<std::size_t>(1, length / 8);
    for (std::size_t i : e.maxima) peaks.push_back(refined_peak(flat, i, half));
    if (peaks.size() < 3) {
      throw EstimationError("fewer than 3 maxima after removing the envelope");
    }
    period = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
  }

  FringeEstimate est;
  est.spacing = period * grid.dx();
  est.maxima = peaks.size();
  double gap_lo = 1e300;
  double gap_hi = 0.0;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    gap_lo = std::min(gap_lo, peaks[i] - peaks[i - 1]);
    gap_hi = std::max(gap_hi, peaks[i] - peaks[i - 1]);
  }
  double h_lo = 1e300;
  double h_hi = 0.0;
  for (std::size_t i : raw.maxima) {
    h_lo = std::min(h_lo, y[i]);
    h_hi = std::max(h_hi, y[i]);
  }
  est.regular = gap_hi <= 1.15 * gap_lo && h_hi <= 5.0 * h_lo;
  return est;
}

double fringe_spacing(std::span<const double> y, const Grid& grid) {
  const FringeEstimate est = estimate_fringes(y, grid);
  if (!est.regular) {
    throw EstimationError("maxima do not form a regular two-slit fringe train");
  }
  return est.spacing;
}

}  // namespace gedanken
