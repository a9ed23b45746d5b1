#include "gedanken/scattering.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase recurrence is re-anchored with an exact polar() this often.
constexpr std::size_t kResync = 64;

void require_resolved(double shape, double step, const char* what) {
  if (!(shape >= 4.0 * step)) {
    std::ostringstream msg;
    msg << what << " " << shape << " is not resolved by the kernel lattice step " << step
        << " (need >= 4 steps)";
    throw ConfigurationError(msg.str());
  }
}

ScatteringKernel uniform_window(double width, double step) {
  require_resolved(width, step, "window width");
  auto cells = static_cast<std::size_t>(std::ceil(width / step - 1e-9));
  if (cells % 2 == 0) ++cells;
  const double cell = width / static_cast<double>(cells);
  const double origin = -0.5 * static_cast<double>(cells - 1) * cell;
  return ScatteringKernel(cell, origin, ComplexVector(cells, Complex{1.0, 0.0}));
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::identity: return "identity";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::boxcar: return "boxcar";
    case KernelKind::lens_aperture: return "lens_aperture";
  }
  return "unknown";
}

ScatteringKernel::ScatteringKernel(double step, double origin, ComplexVector amplitudes)
    : step_(step), origin_(origin), amp_(std::move(amplitudes)) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw ConfigurationError("kernel lattice step must be positive");
  }
  if (amp_.empty()) throw ConfigurationError("kernel needs at least one lattice point");
  double n2 = 0.0;
  for (const Complex& c : amp_) n2 += std::norm(c);
  n2 *= step_;
  if (!(n2 > 0.0)) throw EmptyStateError("kernel amplitudes are all zero");
  const double scale = 1.0 / std::sqrt(n2);
  for (Complex& c : amp_) c *= scale;
}

double ScatteringKernel::mean() const {
  double m = 0.0;
  for (std::size_t l = 0; l < size(); ++l) m += std::norm(amp_[l]) * offset(l);
  return m * step_;
}

double ScatteringKernel::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t l = 0; l < size(); ++l) {
    const double d = offset(l) - m;
    v += std::norm(amp_[l]) * d * d;
  }
  return v * step_;
}

double lens_window_width(double lambda, double epsilon) {
  return 4.0 * kPi * std::sin(epsilon) / lambda;
}

ScatteringKernel kernel_preset(const KernelSpec& spec, double step) {
  if (!(step > 0.0)) throw ConfigurationError("kernel lattice step must be positive");
  switch (spec.kind) {
    case KernelKind::identity:
      return ScatteringKernel(step, 0.0, ComplexVector{Complex{1.0, 0.0}});
    case KernelKind::gaussian: {
      if (!(spec.s > 0.0)) throw ConfigurationError("gaussian kernel needs s > 0");
      require_resolved(spec.s, step, "gaussian kernel width s");
      const auto half = static_cast<std::size_t>(std::ceil(8.0 * spec.s / step));
      ComplexVector amp(2 * half + 1);
      for (std::size_t l = 0; l < amp.size(); ++l) {
        const double dp = (static_cast<double>(l) - static_cast<double>(half)) * step;
        amp[l] = std::exp(-dp * dp / (4.0 * spec.s * spec.s));
      }
      return ScatteringKernel(step, -static_cast<double>(half) * step, std::move(amp));
    }
    case KernelKind::boxcar:
      if (!(spec.width > 0.0)) throw ConfigurationError("boxcar kernel needs width > 0");
      return uniform_window(spec.width, step);
    case KernelKind::lens_aperture:
      if (!(spec.lambda > 0.0)) throw ConfigurationError("lens_aperture needs lambda > 0");
      if (!(spec.epsilon > 0.0 && spec.epsilon < 0.5 * kPi)) {
        throw ConfigurationError("lens_aperture needs 0 < epsilon < pi/2");
      }
      return uniform_window(lens_window_width(spec.lambda, spec.epsilon), step);
  }
  throw ConfigurationError("unknown kernel kind");
}

double default_kernel_step(const Grid& grid) { return 0.25 * grid.dp(); }

KernelSpec kernel_for_overlap(double target, double separation) {
  if (!(target >= 0.0 && target <= 1.0)) {
    throw ConfigurationError("target overlap must lie in [0, 1]");
  }
  if (!(separation > 0.0)) throw ConfigurationError("separation must be positive");
  if (target >= 1.0 - 1e-12) return KernelSpec::identity();
  if (target <= 1e-12) return KernelSpec::boxcar(2.0 * kPi / separation);
  return KernelSpec::gaussian(std::sqrt(-2.0 * std::log(target)) / separation);
}

Complex tag_overlap(const ScatteringKernel& kernel, double xi) {
  Complex sum{0.0, 0.0};
  const auto amp = kernel.amplitudes();
  for (std::size_t l = 0; l < kernel.size(); ++l) {
    sum += std::norm(amp[l]) * std::polar(1.0, kernel.offset(l) * xi);
  }
  return sum * kernel.step();
}

DecoherenceKernel decoherence_kernel(const ScatteringKernel& kernel, std::span<const double> xi) {
  DecoherenceKernel out{RealVector(xi.begin(), xi.end()), ComplexVector(xi.size())};
  for (std::size_t i = 0; i < xi.size(); ++i) out.values[i] = tag_overlap(kernel, xi[i]);
  return out;
}

ComplexVector tag_overlap_on_lattice(const ScatteringKernel& kernel, double dx,
                                     std::size_t count) {
  ComplexVector d(count, Complex{0.0, 0.0});
  const auto amp = kernel.amplitudes();
  for (std::size_t l = 0; l < kernel.size(); ++l) {
    const double w = std::norm(amp[l]) * kernel.step();
    if (w == 0.0) continue;
    const double dp = kernel.offset(l);
    const Complex rotor = std::polar(1.0, dp * dx);
    Complex phase{1.0, 0.0};
    for (std::size_t m = 0; m < count; ++m) {
      if (m % kResync == 0) phase = std::polar(1.0, dp * dx * static_cast<double>(m));
      d[m] += w * phase;
      phase *= rotor;
    }
  }
  return d;
}

DensityMatrix scatter_reduced(const WaveFunction& wf, const ScatteringKernel& kernel) {
  const Grid& grid = wf.grid();
  const std::size_t n = grid.size();
  const ComplexVector d = tag_overlap_on_lattice(kernel, grid.dx(), n);
  const auto psi = wf.amplitudes();
  const auto ni = static_cast<Eigen::Index>(n);
  ComplexMatrix rho(ni, ni);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ck = std::conj(psi[k]);
    Complex* col = rho.col(static_cast<Eigen::Index>(k)).data();
    for (std::size_t j = 0; j < k; ++j) col[j] = psi[j] * ck * std::conj(d[k - j]);
    for (std::size_t j = k; j < n; ++j) col[j] = psi[j] * ck * d[j - k];
  }
  hermitize_in_place(rho);
  return DensityMatrix::normalized(grid, std::move(rho));
}

BranchState entangle_at_slits(const WaveFunction& wf, const Aperture& aperture,
                              const ScatteringKernel& kernel) {
  const Grid& grid = wf.grid();
  aperture.validate(grid);
  const std::vector<double> centers = aperture.slit_centers();

  std::vector<ComplexVector> parts(centers.size(), ComplexVector(grid.size(), Complex{}));
  double outside = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    bool placed = false;
    for (std::size_t s = 0; s < centers.size() && !placed; ++s) {
      if (std::abs(grid.x(j) - centers[s]) <= 0.5 * aperture.width + 1e-9 * grid.dx()) {
        parts[s][j] = wf[j];
        placed = true;
      }
    }
    if (!placed) outside += std::norm(wf[j]);
  }
  if (outside * grid.dx() > 1e-12) {
    throw ConfigurationError("entangle_at_slits: state is not supported on the slits");
  }

  std::vector<Branch> branches;
  double total = 0.0;
  RealVector probs;
  for (const ComplexVector& part : parts) {
    probs.push_back(norm_squared(grid, part));
    total += probs.back();
  }
  for (std::size_t s = 0; s < parts.size(); ++s) {
    if (!(probs[s] > 0.0)) {
      throw EmptyStateError("entangle_at_slits: a slit carries no probability");
    }
    branches.push_back(Branch{WaveFunction(grid, std::move(parts[s])),
                              Complex{std::sqrt(probs[s] / total), 0.0}});
  }

  const auto k = static_cast<Eigen::Index>(centers.size());
  ComplexMatrix gram(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      gram(a, b) = a == b ? Complex{1.0, 0.0}
                          : tag_overlap(kernel, centers[static_cast<std::size_t>(a)] -
                                                    centers[static_cast<std::size_t>(b)]);
    }
  }
  return BranchState(std::move(branches), std::move(gram));
}

JointState build_joint_state(const WaveFunction& wf, const ScatteringKernel& kernel,
                             const Grid& tag_grid) {
  const double dq = tag_grid.dp();
  if (std::abs(kernel.step() - dq) > 1e-9 * dq) {
    std::ostringstream msg;
    msg << "kernel lattice step " << kernel.step() << " does not match the tag grid momentum "
        << "spacing " << dq;
    throw ConfigurationError(msg.str());
  }
  const Grid& grid = wf.grid();
  const std::size_t n = grid.size();
  const std::size_t nt = tag_grid.size();
  JointState joint{grid, tag_grid,
                   ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nt))};

  const auto psi = wf.amplitudes();
  const auto amp = kernel.amplitudes();
  const double scale = grid.dx() / std::sqrt(2.0 * kPi);
  for (std::size_t l = 0; l < kernel.size(); ++l) {
    const double dp = kernel.offset(l);
    const double slot = dp / dq;
    const double rounded = std::round(slot);
    if (std::abs(slot - rounded) > 1e-6) {
      throw ConfigurationError("kernel offsets do not lie on the tag momentum lattice");
    }
    const double col = rounded + static_cast<double>(nt / 2);
    if (col < 0.0 || col >= static_cast<double>(nt)) {
      throw ConfigurationError("kernel support exceeds the tag grid momentum range");
    }
    const auto q = static_cast<Eigen::Index>(col);
    for (std::size_t k = 0; k < n; ++k) {
      // phi(p) = dx/sqrt(2 pi) sum_j psi_j exp(-i p x_j), summed directly.
      const double p = grid.p(k) - dp;
      const Complex rotor = std::polar(1.0, -p * grid.dx());
      Complex phase = std::polar(1.0, -p * grid.x_min());
      Complex phi{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        if (j % kResync == 0) phase = std::polar(1.0, -p * grid.x(j));
        phi += psi[j] * phase;
        phase *= rotor;
      }
      joint.amplitude(static_cast<Eigen::Index>(k), q) = scale * phi * amp[l];
    }
  }
  return joint;
}

DensityMatrix trace_out_tag(const JointState& joint) {
  const Grid& grid = joint.particle;
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexMatrix rho_p = joint.amplitude * joint.amplitude.adjoint() * joint.tag.dp();

  // Inverse transform F_jk = dp/sqrt(2 pi) exp(i p_k x_j), applied as F rho_p F^dagger.
  ComplexMatrix f(n, n);
  const double scale = grid.dp() / std::sqrt(2.0 * kPi);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      f(j, k) = scale * std::polar(1.0, grid.p(static_cast<std::size_t>(k)) *
                                            grid.x(static_cast<std::size_t>(j)));
    }
  }
  ComplexMatrix rho = f * rho_p * f.adjoint();
  hermitize_in_place(rho);
  return DensityMatrix::normalized(grid, std::move(rho));
}

}  // namespace gedanken
