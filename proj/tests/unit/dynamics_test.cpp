#include "phononkin/dynamics.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>

using namespace phononkin;

namespace {

constexpr double pi = std::numbers::pi;

ChainState gaussian_state(const Lattice& lattice, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return sample_homogeneous_gaussian(lattice, equilibrium(lattice, 1.0), rng);
}

double max_diff(const ChainState& a, const ChainState& b) {
  double d = 0.0;
  for (std::size_t y = 0; y < a.size(); ++y) {
    d = std::max({d, std::abs(a.q[y] - b.q[y]), std::abs(a.p[y] - b.p[y])});
  }
  return d;
}

}  // namespace

TEST_CASE("harmonic flow") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 64);
  const ChainState s = gaussian_state(lattice, 1);
  CHECK(max_diff(harmonic_flow(lattice, s, 0.0), s) < 1e-14);

  const double h0 = lattice.hamiltonian(s);
  CHECK(lattice.hamiltonian(harmonic_flow(lattice, s, 1.0)) == doctest::Approx(h0).epsilon(1e-12));
  CHECK(lattice.hamiltonian(harmonic_flow(lattice, s, 37.3)) == doctest::Approx(h0).epsilon(1e-12));

  // A standing wave in mode 5 returns after one period.
  ChainState wave(64);
  for (std::size_t y = 0; y < 64; ++y) wave.q[y] = std::cos(2 * pi * 5.0 * y / 64.0);
  const double period = 2 * pi / lattice.model().omega(5.0 / 64.0);
  CHECK(max_diff(harmonic_flow(lattice, std::as_const(wave), period), wave) < 1e-10);

  // Each Fourier mode picks up the phase exp(-i omega t).
  const auto before = lattice.psi_hat(s);
  const auto after = lattice.psi_hat(harmonic_flow(lattice, s, 0.7));
  double err = 0.0;
  for (std::size_t j = 0; j < 64; ++j) {
    const double w = lattice.table().omega[j];
    err = std::max(err, std::abs(after[j] - std::polar(1.0, -w * 0.7) * before[j]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("free zero mode of an unpinned chain") {
  const Lattice lattice(build_coupling(NearestNeighbor{0.0, 1.0}), 16);
  ChainState s(16);
  for (auto& p : s.p) p = 0.25;
  const auto moved = harmonic_flow(lattice, std::as_const(s), 2.0);
  for (std::size_t y = 0; y < 16; ++y) {
    CHECK(moved.q[y] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(moved.p[y] == doctest::Approx(0.25).epsilon(1e-13));
  }
}

TEST_CASE("noise rotations") {
  std::vector<double> flat(12, 0.7);
  Rng rng = make_stream(2, 0);
  noise_sweep(flat, 0.3, rng);
  for (double v : flat) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));

  std::vector<double> p{0.3, -1.2, 0.8, 2.0, -0.4, 0.1, 1.5, -0.9};
  double s0 = 0.0, e0 = 0.0;
  for (double v : p) {
    s0 += v;
    e0 += v * v;
  }
  for (int i = 0; i < 1000; ++i) noise_sweep(p, 0.01, rng);
  double s1 = 0.0, e1 = 0.0;
  for (double v : p) {
    s1 += v;
    e1 += v * v;
  }
  CHECK(std::abs(s1 - s0) < 1e-12);
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-12));

  // Rotations about the same axis compose additively.
  std::vector<double> a{0.3, -1.2, 0.8, 2.0, -0.4};
  auto b = a;
  rotate_triple(a, 2, 0.4);
  rotate_triple(a, 2, -0.15);
  rotate_triple(b, 2, 0.25);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));

  // Small angles follow the vector field Y_z.
  std::vector<double> c{0.3, -1.2, 0.8, 2.0, -0.4};
  const auto v = noise_field(c, 2);
  const double theta = 1e-7;
  auto d = c;
  rotate_triple(d, 2, theta);
  CHECK((d[1] - c[1]) / theta == doctest::Approx(v[0]).epsilon(1e-5));
  CHECK((d[2] - c[2]) / theta == doctest::Approx(v[1]).epsilon(1e-5));
  CHECK((d[3] - c[3]) / theta == doctest::Approx(v[2]).epsilon(1e-5));
}

TEST_CASE("Ito drift equals one sixth of sum Y_z squared") {
  const std::vector<double> p{0.3, -1.2, 0.8, 2.0, -0.4, 0.1, 1.5, -0.9, 0.05, 0.6};
  const std::size_t n = p.size();
  std::vector<double> oracle(n, 0.0);
  for (std::size_t z = 0; z < n; ++z) {
    // Y_z is linear: apply it twice through noise_field.
    const auto once = noise_field(p, z);
    std::vector<double> tmp(n, 0.0);
    tmp[(z + n - 1) % n] = once[0];
    tmp[z] = once[1];
    tmp[(z + 1) % n] = once[2];
    const auto twice = noise_field(tmp, z);
    oracle[(z + n - 1) % n] += twice[0] / 6.0;
    oracle[z] += twice[1] / 6.0;
    oracle[(z + 1) % n] += twice[2] / 6.0;
  }
  const auto drift = noise_drift(p);
  for (std::size_t y = 0; y < n; ++y) CHECK(drift[y] == doctest::Approx(oracle[y]).epsilon(1e-13));
}

TEST_CASE("gamma = 0 reduces a step to the harmonic flow") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 32);
  SdeConfig cfg;
  cfg.gamma = 0.0;
  cfg.dt = 0.05;
  ChainState s = gaussian_state(lattice, 4);
  const auto expected = harmonic_flow(lattice, std::as_const(s), 0.05);
  Rng rng = make_stream(1, 0);
  step(lattice, s, cfg, rng);
  CHECK(max_diff(s, expected) == 0.0);
}

TEST_CASE("configuration guards") {
  SdeConfig cfg;
  cfg.gamma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.gamma = 1.0;
  cfg.dt = 2.0;
  cfg.epsilon = 0.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.dt = 0.01;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("splitting and Euler-Maruyama agree in law") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 8);
  ChainState start(8);
  start.p = {2.0, -1.0, 0.5, 0.0, 1.0, -0.5, 0.0, 0.3};
  auto moments = [&](Scheme scheme) {
    SdeConfig cfg;
    cfg.epsilon = 1.0;
    cfg.gamma = 1.0;
    cfg.dt = 0.01;
    cfg.scheme = scheme;
    Integrator integ(lattice, cfg);
    constexpr int samples = 20000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < samples; ++i) {
      Rng rng = make_stream(scheme == Scheme::splitting_exact_rotation ? 10 : 20, i);
      ChainState st = start;
      integ.advance(st, 1.0, rng);
      const double v = st.p[0] * st.p[0];
      s += v;
      s2 += v * v;
    }
    const double mean = s / samples;
    return std::pair{mean, std::sqrt((s2 / samples - mean * mean) / samples)};
  };
  const auto [a, sa] = moments(Scheme::splitting_exact_rotation);
  const auto [b, sb] = moments(Scheme::euler_maruyama);
  // Statistical error plus an O(dt) allowance for the weak error of each scheme.
  CHECK(std::abs(a - b) < 4.0 * std::hypot(sa, sb) + 0.05 * std::abs(a));
}

TEST_CASE("ensembles are reproducible and preserve equilibrium") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 32);
  const auto eq = equilibrium(lattice, 1.0);
  const InitialSampler sampler = [&](Rng& rng) { return sample_homogeneous_gaussian(lattice, eq, rng); };
  SdeConfig cfg;
  cfg.epsilon = 0.1;
  cfg.gamma = 1.0;
  cfg.dt = default_time_step(lattice.model(), 0.1, 1.0);
  cfg.seed = 77;
  const Observer obs[] = {{"p2", [](const Lattice&, const ChainState& s) {
                             double a = 0.0;
                             for (double v : s.p) a += v * v;
                             return std::vector<double>{a / static_cast<double>(s.size())};
                           }}};
  const std::vector<double> times{0.0, 1.0};
  const auto r1 = simulate_ensemble(lattice, sampler, cfg, 2000, obs, times, 1);
  const auto r3 = simulate_ensemble(lattice, sampler, cfg, 2000, obs, times, 3);
  bool identical = true;
  for (std::size_t i = 0; i < r1.size(); ++i) identical = identical && r1[i].values == r3[i].values;
  CHECK(identical);

  double drift = 0.0;
  for (const auto& r : r1) drift = std::max(drift, r.energy_drift.back());
  CHECK(drift < 1e-12);

  const auto snaps = summarize(r1, obs);
  REQUIRE(snaps.size() == 2);
  for (const auto& s : snaps) CHECK(std::abs(s.value - 1.0) < 4.0 * s.stderr_);
}
