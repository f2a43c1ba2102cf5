#pragma once

#include "phononkin/coupling.hpp"
#include "phononkin/kernel.hpp"
#include "phononkin/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace phononkin {

/// Kinetic particle: position X, wave vector K, polarization (d >= 2 only), clock.
struct PhononWalker {
  std::vector<double> x;
  std::vector<double> k;
  std::size_t polarization = 0;
  double t = 0.0;
};

/// Jump event (t, X, K, i) reported to an optional log.
using EventLog = std::function<void(const PhononWalker&)>;

/// Jump process with rate gamma phi(K) and free flight at velocity omega'(K) / 2 pi.
///
/// d = 1 uses the chain's dispersion and CollisionKernel1D. d >= 2 uses the
/// nearest-neighbour dispersion omega^2 = omega0^2 + alpha1 sum_l (1 - cos 2 pi k_l)
/// and CollisionKernelDD.
class PhononProcess {
public:
  PhononProcess(const CouplingModel& model, double gamma);
  PhononProcess(NearestNeighbor dispersion, std::size_t dimension, double gamma);

  std::size_t dimension() const noexcept { return d_; }
  double gamma() const noexcept { return gamma_; }
  double rate(std::span<const double> k) const;
  void velocity(std::span<const double> k, std::span<double> v) const;
  /// Scalar velocity for d = 1.
  double velocity(double k) const;

  /// Runs the walker forward to time t_end (>= walker.t).
  void advance(PhononWalker& w, double t_end, Rng& rng, const EventLog& log = {}) const;

private:
  const CouplingModel* model_ = nullptr;
  NearestNeighbor nn_{};
  std::size_t d_ = 1;
  double gamma_ = 0.0;
};

/// Walkers at each requested time; result[time][walker].
std::vector<std::vector<PhononWalker>> simulate_phonon(const PhononProcess& process,
                                                       const std::function<PhononWalker(Rng&)>& initial,
                                                       std::size_t walkers, std::span<const double> times,
                                                       std::uint64_t seed, unsigned threads = 0);

/// Walkers advanced to time t; their empirical law approximates the
/// Boltzmann solution with initial law mu0.
std::vector<PhononWalker> solve_inhomogeneous_mc(const PhononProcess& process,
                                                 const std::function<PhononWalker(Rng&)>& mu0, double t,
                                                 std::size_t walkers, std::uint64_t seed, unsigned threads = 0);

/// Walker at the origin with K uniform on the torus (uniform polarization for d >= 2).
PhononWalker uniform_walker(std::size_t dimension, Rng& rng);

}  // namespace phononkin
