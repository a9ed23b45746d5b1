#pragma once

#include <span>
#include <string>

#include "gedanken/density.hpp"
#include "gedanken/propagation.hpp"

namespace gedanken {

enum class KernelKind { identity, gaussian, boxcar, lens_aperture };

/// Shape of the momentum-exchange amplitude C(dp).
struct KernelSpec {
  KernelKind kind = KernelKind::identity;
  double s = 1.0;        ///< gaussian: std of |C|^2
  double width = 0.0;    ///< boxcar: total window width W
  double lambda = 0.5;   ///< lens_aperture: photon wavelength
  double epsilon = 0.0;  ///< lens_aperture: half-angle of the lens aperture

  static KernelSpec identity() { return {}; }
  static KernelSpec gaussian(double s) { return {KernelKind::gaussian, s, 0.0, 0.5, 0.0}; }
  static KernelSpec boxcar(double width) { return {KernelKind::boxcar, 1.0, width, 0.5, 0.0}; }
  static KernelSpec lens_aperture(double lambda, double epsilon) {
    return {KernelKind::lens_aperture, 1.0, 0.0, lambda, epsilon};
  }
};

std::string to_string(KernelKind kind);

/// Probability amplitude C(dp) for a momentum exchange dp, sampled on the
/// uniform lattice dp_l = origin + l*step and normalized so that
/// sum_l |C_l|^2 step = 1.
class ScatteringKernel {
 public:
  ScatteringKernel(double step, double origin, ComplexVector amplitudes);

  double step() const { return step_; }
  std::size_t size() const { return amp_.size(); }
  double offset(std::size_t l) const { return origin_ + static_cast<double>(l) * step_; }
  std::span<const Complex> amplitudes() const { return amp_; }

  /// Mean and variance of the exchange distribution |C|^2.
  double mean() const;
  double variance() const;

 private:
  double step_;
  double origin_;
  ComplexVector amp_;
};

/// Total momentum window 4 pi sin(epsilon) / lambda accepted by a lens of
/// half-angle epsilon for light of wavelength lambda.
double lens_window_width(double lambda, double epsilon);

/// Builds a preset kernel on a lattice with spacing at most `step`.
/// identity: a single point at dp = 0. gaussian: |C|^2 ~ N(0, s^2), sampled
/// over +-8 s. boxcar / lens_aperture: uniform |C|^2 over a window of width W
/// represented by an odd number of cells of width W/M <= step.
/// Throws ConfigurationError when the shape is not resolved (s or W < 4 step).
ScatteringKernel kernel_preset(const KernelSpec& spec, double step);

/// Kernel lattice spacing used by the scenarios: a quarter of the grid's
/// momentum spacing, so D(xi) has period 4x the grid extent.
double default_kernel_step(const Grid& grid);

/// Kernel whose tag overlap at separation `separation` equals `target`:
/// identity for 1, a boxcar with W*a = 2 pi for 0, a gaussian otherwise.
KernelSpec kernel_for_overlap(double target, double separation);

/// Tag overlap D(xi) = sum_l |C_l|^2 step exp(i dp_l xi).
Complex tag_overlap(const ScatteringKernel& kernel, double xi);

struct DecoherenceKernel {
  RealVector xi;
  ComplexVector values;
};

DecoherenceKernel decoherence_kernel(const ScatteringKernel& kernel, std::span<const double> xi);

/// D(m dx) for m = 0..count-1, computed with a phase recurrence.
ComplexVector tag_overlap_on_lattice(const ScatteringKernel& kernel, double dx,
                                     std::size_t count);

/// Particle state after an instantaneous momentum-exchange scattering,
/// with the scattered partner traced out:
/// rho(x,x') = psi(x) conj(psi(x')) D(x - x').
DensityMatrix scatter_reduced(const WaveFunction& wf, const ScatteringKernel& kernel);

/// Splits a post-aperture state into one branch per slit. The branches carry
/// the restricted (renormalized) wavefunction and weight sqrt(P_slit); the
/// Gram entry between slits j and k is D(c_j - c_k).
BranchState entangle_at_slits(const WaveFunction& wf, const Aperture& aperture,
                              const ScatteringKernel& kernel);

/// Explicit particle-tag amplitude Psi(p_e, dp) = phi(p_e - dp) C(dp) with
/// rows on the particle's momentum lattice and columns on tag_grid's
/// momentum lattice (the exchange dp). phi is evaluated by direct summation.
struct JointState {
  Grid particle;
  Grid tag;
  ComplexMatrix amplitude;
};

/// Throws ConfigurationError when the kernel lattice does not coincide with
/// the tag grid's momentum lattice or does not fit inside it.
JointState build_joint_state(const WaveFunction& wf, const ScatteringKernel& kernel,
                             const Grid& tag_grid);

/// Partial trace over the tag, returned in the particle's position basis.
DensityMatrix trace_out_tag(const JointState& joint);

}  // namespace gedanken
