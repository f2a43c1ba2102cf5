#include "phononkin/phonon_mc.hpp"

#include "phononkin/errors.hpp"
#include "phononkin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phononkin {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::size_t chunk = 1024;

}  // namespace

PhononProcess::PhononProcess(const CouplingModel& model, double gamma) : model_(&model), d_(1), gamma_(gamma) {
  if (!(gamma >= 0.0)) {
    throw Error("gamma must be nonnegative");
  }
}

PhononProcess::PhononProcess(NearestNeighbor dispersion, std::size_t dimension, double gamma)
    : nn_(dispersion), d_(dimension), gamma_(gamma) {
  if (d_ < 2) {
    throw Error("use the chain constructor for d = 1");
  }
  if (!(gamma >= 0.0)) {
    throw Error("gamma must be nonnegative");
  }
  if (!(dispersion.alpha1 > 0.0) || dispersion.omega0_sq < 0.0) {
    throw Error("nearest-neighbour dispersion needs alpha1 > 0 and omega0^2 >= 0");
  }
}

double PhononProcess::rate(std::span<const double> k) const {
  if (d_ == 1) {
    return gamma_ * CollisionKernel1D::phi(k[0]);
  }
  return gamma_ * CollisionKernelDD(d_).phi(k);
}

double PhononProcess::velocity(double k) const { return model_->omega_prime(k) / two_pi; }

void PhononProcess::velocity(std::span<const double> k, std::span<double> v) const {
  if (d_ == 1) {
    v[0] = velocity(k[0]);
    return;
  }
  double w2 = nn_.omega0_sq;
  for (std::size_t l = 0; l < d_; ++l) {
    w2 += nn_.alpha1 * (1.0 - std::cos(two_pi * k[l]));
  }
  const double w = std::sqrt(w2);
  for (std::size_t l = 0; l < d_; ++l) {
    // omega' / 2 pi = alpha1 sin(2 pi k_l) / (2 omega)
    v[l] = w > 0.0 ? nn_.alpha1 * std::sin(two_pi * k[l]) / (2.0 * w) : 0.0;
  }
}

void PhononProcess::advance(PhononWalker& w, double t_end, Rng& rng, const EventLog& log) const {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(d_);
  const CollisionKernelDD* dd = nullptr;
  CollisionKernelDD kernel_dd(std::max<std::size_t>(d_, 2));
  if (d_ >= 2) {
    dd = &kernel_dd;
  }
  while (w.t < t_end) {
    const double r = rate(w.k);
    const double wait = r > 0.0 ? expo(rng) / r : t_end - w.t;
    const double flight = std::min(wait, t_end - w.t);
    velocity(w.k, v);
    for (std::size_t l = 0; l < d_; ++l) {
      w.x[l] += v[l] * flight;
    }
    w.t += flight;
    if (wait > flight || r <= 0.0) {
      w.t = t_end;
      break;
    }
    if (d_ == 1) {
      w.k[0] = CollisionKernel1D::sample(w.k[0], rng);
    } else {
      w.polarization = dd->sample(w.k, w.polarization, rng);
    }
    if (log) {
      log(w);
    }
  }
}

std::vector<std::vector<PhononWalker>> simulate_phonon(const PhononProcess& process,
                                                       const std::function<PhononWalker(Rng&)>& initial,
                                                       std::size_t walkers, std::span<const double> times,
                                                       std::uint64_t seed, unsigned threads) {
  if (!std::is_sorted(times.begin(), times.end())) {
    throw Error("sample times must be sorted");
  }
  std::vector<std::vector<PhononWalker>> out(times.size(), std::vector<PhononWalker>(walkers));
  const std::size_t chunks = (walkers + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = make_stream(seed, c);
    const std::size_t end = std::min(walkers, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      PhononWalker w = initial(rng);
      if (w.x.size() != process.dimension() || w.k.size() != process.dimension()) {
        throw Error("walker dimension does not match the process");
      }
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        process.advance(w, times[ti], rng);
        out[ti][i] = w;
      }
    }
  });
  return out;
}

std::vector<PhononWalker> solve_inhomogeneous_mc(const PhononProcess& process,
                                                 const std::function<PhononWalker(Rng&)>& mu0, double t,
                                                 std::size_t walkers, std::uint64_t seed, unsigned threads) {
  const double times[] = {t};
  return std::move(simulate_phonon(process, mu0, walkers, times, seed, threads).front());
}

PhononWalker uniform_walker(std::size_t dimension, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PhononWalker w;
  w.x.assign(dimension, 0.0);
  w.k.resize(dimension);
  for (double& k : w.k) {
    k = unif(rng);
  }
  if (dimension >= 2) {
    w.polarization = std::uniform_int_distribution<std::size_t>(0, dimension - 1)(rng);
  }
  return w;
}

}  // namespace phononkin
