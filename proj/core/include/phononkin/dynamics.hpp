#pragma once

#include "phononkin/chain.hpp"
#include "phononkin/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace phononkin {

enum class Scheme { splitting_exact_rotation, euler_maruyama };

/// Parameters of the perturbed dynamics with generator A + eps*gamma*S.
/// `dt` is the microscopic step; `horizon` the macroscopic final time
/// (microscopic horizon / eps).
struct SdeConfig {
  double epsilon = 0.1;
  double gamma = 1.0;
  double dt = 0.01;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::splitting_exact_rotation;

  /// Throws Error unless eps > 0, gamma >= 0, dt > 0, horizon > 0 and dt*gamma*eps <= 0.1.
  void validate() const;
};

/// dt = 0.1 / max omega, capped by 0.01 / (eps gamma).
double default_time_step(const CouplingModel& model, double epsilon, double gamma);

/// psi_hat(k) -> exp(-i omega(k) t) psi_hat(k), done exactly per Fourier mode
/// on (q_hat, p_hat). For an unpinned zero mode q_hat(0) advances by t p_hat(0).
void harmonic_flow(const Lattice& lattice, ChainState& state, double t);
ChainState harmonic_flow(const Lattice& lattice, const ChainState& state, double t);

/// Components (Y_z p_{z-1}, Y_z p_z, Y_z p_{z+1}) of the vector field Y_z.
std::array<double, 3> noise_field(std::span<const double> p, std::size_t z);

/// Exact flow of Y_z for parameter theta: rotation of (p_{z-1}, p_z, p_{z+1})
/// about (1,1,1) by the angle -sqrt(3) theta.
void rotate_triple(std::span<double> p, std::size_t z, double theta);

/// One sweep of the flows of all Y_z in a fresh random order, each with
/// theta ~ Normal(0, variance). A sweep with variance dt/3 has generator
/// (1/6) sum_z Y_z^2 = S to first order in dt.
void noise_sweep(std::span<double> p, double variance, Rng& rng);

/// noise_step(state, dt) = noise_sweep with variance dt / 3.
void noise_step(ChainState& state, double dt, Rng& rng);

/// Stochastic part of the Euler-Maruyama drift: (1/6) Laplacian(4p + p_- + p_+).
std::vector<double> noise_drift(std::span<const double> p);

/// One Euler-Maruyama step driven by given Wiener increments dw[z] (variance dt each).
void euler_maruyama_step(const Lattice& lattice, ChainState& state, double noise_strength, double dt,
                         std::span<const double> dw);

/// Reusable integrator; owns scratch buffers, so use one per thread.
class Integrator {
public:
  Integrator(const Lattice& lattice, const SdeConfig& cfg);

  /// One step of length dt with the configured scheme.
  void step(ChainState& state, double dt, Rng& rng);
  /// Advances by `micro_time` with steps no longer than cfg.dt, landing exactly.
  void advance(ChainState& state, double micro_time, Rng& rng);

  const SdeConfig& config() const noexcept { return cfg_; }

private:
  const Lattice* lattice_;
  SdeConfig cfg_;
  std::vector<double> dw_;
};

/// One step of the configured scheme with cfg.dt.
void step(const Lattice& lattice, ChainState& state, const SdeConfig& cfg, Rng& rng);

using InitialSampler = std::function<ChainState(Rng&)>;

/// Named per-state observable; returns one or more real components.
struct Observer {
  std::string id;
  std::function<std::vector<double>(const Lattice&, const ChainState&)> eval;
};

/// Observables of one trajectory at the requested macroscopic times.
struct TrajectoryRecord {
  std::vector<double> times;
  /// values[observer][time] -> components.
  std::vector<std::vector<std::vector<double>>> values;
  /// |H(t) - H(0)| / H(0).
  std::vector<double> energy_drift;
  /// |sum p(t) - sum p(0)| / sum |p(0)|.
  std::vector<double> momentum_drift;
};

/// M independent trajectories; trajectory i draws everything from
/// make_stream(cfg.seed, i). Results do not depend on the thread count.
std::vector<TrajectoryRecord> simulate_ensemble(const Lattice& lattice, const InitialSampler& sampler,
                                                const SdeConfig& cfg, std::size_t trajectories,
                                                std::span<const Observer> observers,
                                                std::span<const double> times, unsigned threads = 0);

/// Ensemble mean and standard error of one observable component.
struct Snapshot {
  double time = 0.0;
  std::string observable;
  std::size_t component = 0;
  double value = 0.0;
  double stderr_ = 0.0;
};

std::vector<Snapshot> summarize(std::span<const TrajectoryRecord> records, std::span<const Observer> observers);

}  // namespace phononkin
