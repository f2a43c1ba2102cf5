#pragma once

#include "phononkin/chain.hpp"
#include "phononkin/dynamics.hpp"
#include "phononkin/rng.hpp"
#include "phononkin/spectral_function.hpp"

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace phononkin {

/// Value with a standard error.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Delete-one jackknife of estimator(excluded) over n units; estimator(n)
/// (an index past the end) must return the full-sample value.
Estimate jackknife(std::size_t n, const std::function<double(std::size_t)>& estimator);
/// Jackknife of the sample mean (equals the usual standard error of the mean).
Estimate jackknife_mean(std::span<const double> samples);

/// Mean-zero translation-invariant Gaussian measure with <psi psi> = 0 and
/// Fourier covariance W on the lattice grid.
struct GaussianFieldSpec {
  std::vector<double> covariance_w;
};

/// Throws NegativeCovariance if W < 0 anywhere, or Error on a grid mismatch.
void validate(const GaussianFieldSpec& spec, const Lattice& lattice);

/// psi_hat(k) = sqrt(N W(k)) zeta(k) with zeta standard complex Gaussian.
/// For an unpinned model the zero mode carries only momentum:
/// p_hat(0) = sqrt(N W(0)) xi with xi real, q_hat(0) = 0.
ChainState sample_homogeneous_gaussian(const Lattice& lattice, const GaussianFieldSpec& spec, Rng& rng);

/// W = T on every grid point (equilibrium at temperature T).
GaussianFieldSpec equilibrium(const Lattice& lattice, double temperature);

/// W(k) = omega / (omega / T + i tau g_hat(k)) for an odd sequence g given by
/// its positive offsets. Real because g_hat is imaginary. Throws
/// NegativeCovariance unless 1/T - tau h/omega > 0 on the grid, where g_hat = i h.
GaussianFieldSpec perturbed_covariance(const Lattice& lattice, const std::map<int, double>& g_positive,
                                       double temperature, double tau);

/// (eps/2) |psi_hat(k)|^2 for one state.
std::vector<double> energy_spectrum_sample(const Lattice& lattice, const ChainState& state, double epsilon);

/// (eps/2) mean |psi_hat(k)|^2 with jackknife standard errors.
SpectralFunction estimate_energy_spectrum(const Lattice& lattice, std::span<const ChainState> ensemble,
                                          double epsilon);
/// Same reduction from per-trajectory samples (one vector per trajectory).
SpectralFunction reduce_spectrum(std::span<const std::vector<double>> samples);

/// (eps/2) mean psi_hat(k) psi_hat(-k).
SpectralFunction estimate_Y_field(const Lattice& lattice, std::span<const ChainState> ensemble, double epsilon);

/// Windowed Wigner estimate. Cells of width Delta = eps N / x_cells tile the
/// macroscopic torus with windows w_c(x) = cos(pi (x - x_c) / (2 Delta)) on
/// |x - x_c| < Delta, whose squares sum to one. Entry (c, b) is
/// (eps/2) (1/N) sum_{k in band b} <|sum_y w_c(eps y) e^{-2 pi i k y} psi(y)|^2>.
/// Window of the x cell centred at `center`: cos(pi d / 2 delta) for periodic
/// distance |d| < delta on a circle of circumference `length`, else 0. The
/// squares of the windows of consecutive cells sum to one.
double wigner_window(double x, double center, double delta, double length);

struct WignerEstimate {
  std::vector<double> x_centers;
  std::vector<double> k_centers;
  /// values[c * bands + b]
  std::vector<double> values;
  std::vector<double> stderr_;
  std::size_t bands = 0;

  double at(std::size_t c, std::size_t b) const { return values[c * bands + b]; }
};

/// Throws ResolutionError when a window spans fewer sites than k bands.
WignerEstimate estimate_wigner(const Lattice& lattice, std::span<const ChainState> ensemble, double epsilon,
                               std::size_t x_cells, std::size_t k_band_count);

/// Observer recording (eps/2)|psi_hat(k)|^2.
Observer energy_spectrum_observer(double epsilon);

}  // namespace phononkin
