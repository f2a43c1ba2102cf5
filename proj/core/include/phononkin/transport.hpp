#pragma once

#include "phononkin/chain.hpp"
#include "phononkin/dynamics.hpp"
#include "phononkin/phonon_mc.hpp"
#include "phononkin/scaling.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <vector>

namespace phononkin {

/// Time series with ensemble standard errors.
struct CorrelationSeries {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> stderr_;
};

/// Columns t, value, stderr.
void write_csv(std::ostream& out, const CorrelationSeries& series);

/// Total energy current sum_x tau_x J with
/// J = (1/4) sum_z z alpha(z) (q_z p_0 - q_0 p_z), oriented so that
/// A e_x = tau_{x-1} J - tau_x J. Equals (1/2 pi N) sum_k omega'(k) |psi_hat(k)|^2.
double total_current(const Lattice& lattice, const ChainState& state);

/// (1/2 pi) int omega' W dk on the lattice grid.
double mean_current_prediction(const Lattice& lattice, std::span<const double> w);

/// C(t) = T^2 / (4 pi^2) int |omega'|^2 exp(-gamma phi |t|) dk by adaptive quadrature.
double kinetic_current_correlation(const CouplingModel& model, double gamma, double temperature, double t);

struct MicroCorrelationConfig {
  double temperature = 1.0;
  double epsilon = 0.05;
  double gamma = 1.0;
  std::size_t lattice_size = 128;
  std::size_t trajectories = 500;
  /// Lags (macroscopic); each must be a multiple of `spacing`.
  std::vector<double> lags;
  /// Macroscopic distance between recorded times.
  double spacing = 0.05;
  /// Length of the stretch of time origins averaged per trajectory.
  double origin_span = 40.0;
  double dt = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// (1/N) <J_tot(s + t) J_tot(s)> from equilibrium trajectories, averaged over
/// time origins s in [0, origin_span] and then over trajectories.
CorrelationSeries micro_current_correlation(const CouplingModel& model, const MicroCorrelationConfig& cfg);

/// Odd sequence g(z) = -g(-z); keys may be given on both sides or positive only.
using OddSequence = std::map<int, double>;

/// Positive offsets of g; throws InadmissibleG unless g is odd with g(0) = 0.
std::map<int, double> positive_part(const OddSequence& g);

/// g_hat(k) = sum_z g(z) exp(-2 pi i k z) = i h(k); returns h.
double odd_symbol(const std::map<int, double>& g_positive, double k);

/// T^2 int |g_hat|^2 / omega^2 exp(-gamma phi t) dk. Throws InadmissibleG if
/// g_hat / omega is unbounded.
double total_time_covariance(const CouplingModel& model, const OddSequence& g, double temperature, double gamma,
                             double t);

/// Phi averaged over translations: (1/N) sum_y sum_x g(x) p_{x+y} q_y.
double phi_observable(const std::map<int, double>& g_positive, const ChainState& state);

struct PerturbedRouteConfig {
  double temperature = 1.0;
  double epsilon = 0.05;
  double gamma = 1.0;
  std::size_t lattice_size = 128;
  std::size_t trajectories = 200;
  std::vector<double> taus{1e-2, 5e-3};
  std::vector<double> times{0.0, 0.5, 1.0};
  double dt = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// (1/tau)(<Phi(t/eps)>_{T,tau} - <Phi(t/eps)>_T) for each tau, with common
/// random numbers, and the linear extrapolation 2 f(tau/2) - f(tau) when the
/// two taus differ by a factor 2.
struct PerturbedRouteResult {
  std::vector<CorrelationSeries> per_tau;
  CorrelationSeries extrapolated;
};

PerturbedRouteResult micro_total_time_covariance(const CouplingModel& model, const OddSequence& g,
                                                 const PerturbedRouteConfig& cfg);

/// Solution of lambda f - (gamma/6) Delta(4 f + f(.+1) + f(.-1)) = g on a periodic
/// lattice of n sites, with the two Laplace values of the total time covariance.
struct Resolvent {
  /// f[z + n/2] holds f(z) for z in [-n/2, n/2).
  std::vector<double> f;
  std::size_t n = 0;
  /// Max over sites of |lambda f - (gamma/6) Delta(...) - g|.
  double residual = 0.0;
  /// T^2 int |g_hat|^2 / (omega^2 (lambda + gamma phi)) dk by quadrature.
  double laplace_formula = 0.0;
  /// T^2 int conj(f_hat) g_hat / omega^2 dk from the computed sequence.
  double laplace_from_sequence = 0.0;

  double at(int z) const { return f[static_cast<std::size_t>(z + static_cast<int>(n / 2))]; }
};

Resolvent resolvent_f_lambda(const CouplingModel& model, const OddSequence& g, double lambda, double gamma,
                             double temperature, std::size_t n = 4096);

/// int_0^inf exp(-lambda t) F(t) dt with F the kinetic total time covariance.
double laplace_of_total_covariance(const CouplingModel& model, const OddSequence& g, double temperature,
                                   double gamma, double lambda);

/// kappa0 = (1/4 pi^2) int |omega'|^2 / (gamma phi) dk.
struct Conductivity {
  bool finite = false;
  /// Midpoint rule on 2^13 points (finite case).
  double value = 0.0;
  /// Midpoint rule on 2^12 points (finite case).
  double value_coarse = 0.0;
  /// Divergent case: slope of log int_{rho < |k| <= 1/2} vs log rho.
  double cutoff_exponent = 0.0;
  std::vector<double> rho;
  std::vector<double> partial;
};

Conductivity kappa0(const CouplingModel& model, double gamma);

/// (1/T^2) int_0^inf C(t) dt.
double green_kubo_integral(const CouplingModel& model, double gamma, double temperature);

/// Median |X(t)| over walkers started at 0 with K uniform, fitted on log-log.
/// The interval comes from resampling walkers.
struct SuperdiffusionResult {
  std::vector<double> times;
  std::vector<double> median_abs_x;
  ScalingFit fit;
};

SuperdiffusionResult superdiffusion_exponent(const PhononProcess& process, std::span<const double> times,
                                             std::size_t walkers, std::uint64_t seed, unsigned threads = 0,
                                             std::size_t resamples = 200);

/// Exact variance of X(t) for d = 1 walkers with uniform K:
/// 2 int v^2 (t / r - (1 - e^{-r t}) / r^2) dk, r = gamma phi, v = omega' / 2 pi.
double phonon_position_variance(const CouplingModel& model, double gamma, double t);

}  // namespace phononkin
