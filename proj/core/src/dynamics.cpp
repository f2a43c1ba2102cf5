#include "phononkin/dynamics.hpp"

#include "phononkin/errors.hpp"
#include "phononkin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace phononkin {

namespace {

std::size_t wrap(std::size_t i, std::size_t n, int shift) {
  return (i + n + static_cast<std::size_t>(shift + static_cast<int>(n))) % n;
}

using ComplexL = std::complex<long double>;

void rotate_modes(const DispersionTable& table, std::vector<ComplexL>& z, double t) {
  const std::size_t n = z.size();
  const ComplexL iu{0.0L, 1.0L};
  // z holds the DFT of q + i p; split into q_hat, p_hat per conjugate pair.
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const std::size_t mj = (n - j) % n;
    const ComplexL a = z[j];
    const ComplexL b = std::conj(z[mj]);
    const ComplexL qh = 0.5L * (a + b);
    const ComplexL ph = (a - b) / (2.0L * iu);
    const ComplexL am = z[mj];
    const ComplexL bm = std::conj(z[j]);
    const ComplexL qm = 0.5L * (am + bm);
    const ComplexL pm = (am - bm) / (2.0L * iu);

    const long double w = table.omega[j];
    const long double tl = t;
    ComplexL q1, p1, q2, p2;
    if (w > 0.0L) {
      const long double c = std::cos(w * tl);
      const long double s = std::sin(w * tl);
      q1 = c * qh + (s / w) * ph;
      p1 = -w * s * qh + c * ph;
      q2 = c * qm + (s / w) * pm;
      p2 = -w * s * qm + c * pm;
    } else {
      q1 = qh + tl * ph;
      p1 = ph;
      q2 = qm + tl * pm;
      p2 = pm;
    }
    z[j] = q1 + iu * p1;
    z[mj] = q2 + iu * p2;
  }
}

}  // namespace

void SdeConfig::validate() const {
  if (!(epsilon > 0.0)) {
    throw Error("epsilon must be positive");
  }
  if (!(gamma >= 0.0)) {
    throw Error("gamma must be nonnegative");
  }
  if (!(dt > 0.0)) {
    throw Error("dt must be positive");
  }
  if (!(horizon > 0.0)) {
    throw Error("horizon must be positive");
  }
  if (dt * gamma * epsilon > 0.1) {
    throw Error("dt * gamma * epsilon exceeds 0.1");
  }
}

double default_time_step(const CouplingModel& model, double epsilon, double gamma) {
  double dt = 0.1 / model.max_omega();
  if (epsilon * gamma > 0.0) {
    dt = std::min(dt, 0.01 / (epsilon * gamma));
  }
  return dt;
}

void harmonic_flow(const Lattice& lattice, ChainState& state, double t) {
  const std::size_t n = lattice.size();
  if (state.size() != n || state.q.size() != n) {
    throw Error("chain state size does not match lattice");
  }
  // Extended precision keeps H from drifting over long runs.
  thread_local std::vector<ComplexL> z;
  z.resize(n);
  for (std::size_t y = 0; y < n; ++y) {
    z[y] = ComplexL(state.q[y], state.p[y]);
  }
  lattice.extended_dft().forward(z);
  rotate_modes(lattice.table(), z, t);
  lattice.extended_dft().inverse(z);
  for (std::size_t y = 0; y < n; ++y) {
    state.q[y] = static_cast<double>(z[y].real());
    state.p[y] = static_cast<double>(z[y].imag());
  }
}

ChainState harmonic_flow(const Lattice& lattice, const ChainState& state, double t) {
  ChainState out = state;
  harmonic_flow(lattice, out, t);
  return out;
}

std::array<double, 3> noise_field(std::span<const double> p, std::size_t z) {
  const std::size_t n = p.size();
  const double a = p[wrap(z, n, -1)];
  const double b = p[z];
  const double c = p[wrap(z, n, 1)];
  return {b - c, c - a, a - b};
}

void rotate_triple(std::span<double> p, std::size_t z, double theta) {
  const std::size_t n = p.size();
  const std::size_t im = wrap(z, n, -1);
  const std::size_t ip = wrap(z, n, 1);
  const double a = p[im];
  const double b = p[z];
  const double c = p[ip];
  const double m = (a + b + c) / 3.0;
  const double da = a - m;
  const double db = b - m;
  const double dc = c - m;
  // n x d with n = (1,1,1)/sqrt 3
  constexpr double r3 = 1.0 / std::numbers::sqrt3;
  const double xa = (dc - db) * r3;
  const double xb = (da - dc) * r3;
  const double xc = (db - da) * r3;
  const double phi = std::numbers::sqrt3 * theta;
  double cs = std::cos(phi);
  double sn = std::sin(phi);
  const double r = std::hypot(cs, sn);
  cs /= r;
  sn /= r;
  p[im] = m + da * cs - xa * sn;
  p[z] = m + db * cs - xb * sn;
  p[ip] = m + dc * cs - xc * sn;
}

void noise_sweep(std::span<double> p, double variance, Rng& rng) {
  const std::size_t n = p.size();
  if (n < 3) {
    throw Error("noise needs at least three sites");
  }
  thread_local std::vector<std::size_t> order;
  order.resize(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (std::size_t z : order) {
    rotate_triple(p, z, normal(rng));
  }
}

void noise_step(ChainState& state, double dt, Rng& rng) { noise_sweep(state.p, dt / 3.0, rng); }

std::vector<double> noise_drift(std::span<const double> p) {
  const std::size_t n = p.size();
  std::vector<double> out(n);
  for (std::size_t y = 0; y < n; ++y) {
    out[y] = (p[wrap(y, n, -2)] + 2.0 * p[wrap(y, n, -1)] - 6.0 * p[y] + 2.0 * p[wrap(y, n, 1)] +
              p[wrap(y, n, 2)]) /
             6.0;
  }
  return out;
}

void euler_maruyama_step(const Lattice& lattice, ChainState& state, double noise_strength, double dt,
                         std::span<const double> dw) {
  const std::size_t n = lattice.size();
  if (dw.size() != n) {
    throw Error("one Wiener increment per site required");
  }
  const std::vector<double> p0 = state.p;
  const auto drift = noise_drift(p0);
  const double amp = std::sqrt(noise_strength / 3.0);

  // Symplectic Euler for the Hamiltonian part keeps the oscillators bounded.
  for (std::size_t y = 0; y < n; ++y) {
    state.q[y] += p0[y] * dt;
  }
  const CouplingModel& model = lattice.model();
  const int range = model.range();
  for (std::size_t y = 0; y < n; ++y) {
    double force = 0.0;
    for (int z = -range; z <= range; ++z) {
      force -= model.alpha(z) * state.q[wrap(y, n, z)];
    }
    state.p[y] += (force + noise_strength * drift[y]) * dt;
  }
  for (std::size_t z = 0; z < n; ++z) {
    const auto v = noise_field(p0, z);
    state.p[wrap(z, n, -1)] += amp * v[0] * dw[z];
    state.p[z] += amp * v[1] * dw[z];
    state.p[wrap(z, n, 1)] += amp * v[2] * dw[z];
  }
}

Integrator::Integrator(const Lattice& lattice, const SdeConfig& cfg)
    : lattice_(&lattice), cfg_(cfg), dw_(lattice.size()) {
  cfg_.validate();
}

void Integrator::step(ChainState& state, double dt, Rng& rng) {
  const double strength = cfg_.epsilon * cfg_.gamma;
  if (cfg_.scheme == Scheme::splitting_exact_rotation) {
    harmonic_flow(*lattice_, state, dt);
    if (strength > 0.0) {
      noise_sweep(state.p, strength * dt / 3.0, rng);
    }
    return;
  }
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  for (double& w : dw_) {
    w = normal(rng);
  }
  euler_maruyama_step(*lattice_, state, strength, dt, dw_);
}

void Integrator::advance(ChainState& state, double micro_time, Rng& rng) {
  if (micro_time <= 0.0) {
    return;
  }
  const auto steps = static_cast<std::size_t>(std::ceil(micro_time / cfg_.dt - 1e-9));
  const double h = micro_time / static_cast<double>(std::max<std::size_t>(steps, 1));
  for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
    step(state, h, rng);
  }
}

void step(const Lattice& lattice, ChainState& state, const SdeConfig& cfg, Rng& rng) {
  Integrator(lattice, cfg).step(state, cfg.dt, rng);
}

std::vector<TrajectoryRecord> simulate_ensemble(const Lattice& lattice, const InitialSampler& sampler,
                                                const SdeConfig& cfg, std::size_t trajectories,
                                                std::span<const Observer> observers,
                                                std::span<const double> times, unsigned threads) {
  if (trajectories == 0) {
    throw Error("ensemble size must be at least 1");
  }
  cfg.validate();
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw Error("sample times must be sorted and nonnegative");
  }
  std::vector<TrajectoryRecord> records(trajectories);
  parallel_for(trajectories, threads, [&](std::size_t i) {
    Rng rng = make_stream(cfg.seed, i);
    ChainState state = sampler(rng);
    Integrator integrator(lattice, cfg);
    TrajectoryRecord& rec = records[i];
    rec.times.assign(times.begin(), times.end());
    rec.values.assign(observers.size(), {});
    const double h0 = lattice.hamiltonian(state);
    const double p0 = total_momentum(state);
    double l1 = 0.0;
    for (double v : state.p) {
      l1 += std::abs(v);
    }
    double now = 0.0;
    for (double t : times) {
      const double target = t / cfg.epsilon;
      integrator.advance(state, target - now, rng);
      now = target;
      for (std::size_t o = 0; o < observers.size(); ++o) {
        rec.values[o].push_back(observers[o].eval(lattice, state));
      }
      const double h = lattice.hamiltonian(state);
      rec.energy_drift.push_back(h0 > 0.0 ? std::abs(h - h0) / h0 : std::abs(h - h0));
      const double dp = std::abs(total_momentum(state) - p0);
      rec.momentum_drift.push_back(l1 > 0.0 ? dp / l1 : dp);
    }
  });
  return records;
}

std::vector<Snapshot> summarize(std::span<const TrajectoryRecord> records, std::span<const Observer> observers) {
  std::vector<Snapshot> out;
  if (records.empty()) {
    return out;
  }
  const auto m = static_cast<double>(records.size());
  const auto& first = records.front();
  for (std::size_t o = 0; o < observers.size(); ++o) {
    for (std::size_t ti = 0; ti < first.times.size(); ++ti) {
      const std::size_t comps = first.values[o][ti].size();
      for (std::size_t c = 0; c < comps; ++c) {
        double s = 0.0;
        double s2 = 0.0;
        for (const auto& r : records) {
          const double v = r.values[o][ti][c];
          s += v;
          s2 += v * v;
        }
        const double mean = s / m;
        const double var = records.size() > 1 ? std::max(0.0, (s2 - m * mean * mean) / (m - 1.0)) : 0.0;
        out.push_back({first.times[ti], observers[o].id, c, mean, std::sqrt(var / m)});
      }
    }
  }
  return out;
}

}  // namespace phononkin
