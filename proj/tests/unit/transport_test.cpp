#include "phononkin/errors.hpp"
#include "phononkin/kernel.hpp"
#include "phononkin/observables.hpp"
#include "phononkin/phonon_mc.hpp"
#include "phononkin/scaling.hpp"
#include "phononkin/transport.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace phononkin;

namespace {

constexpr double pi = std::numbers::pi;

double midpoint(const std::function<double(double)>& f, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += f((j + 0.5) / n);
  return s / n;
}

}  // namespace

TEST_CASE("kinetic current correlation") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const double temp = 1.4, gamma = 0.7;
  for (double t : {0.0, 0.8}) {
    const double dense = temp * temp / (4 * pi * pi) * midpoint([&](double k) {
      const double v = pinned.omega_prime(k);
      return v * v * std::exp(-gamma * CollisionKernel1D::phi(k) * t);
    }, 10000);
    CHECK(kinetic_current_correlation(pinned, gamma, temp, t) == doctest::Approx(dense).epsilon(1e-8));
    CHECK(kinetic_current_correlation(pinned, gamma, temp, -t) ==
          doctest::Approx(kinetic_current_correlation(pinned, gamma, temp, t)).epsilon(1e-14));
  }
}

TEST_CASE("total current") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 64);
  GaussianFieldSpec spec{std::vector<double>(64)};
  for (std::size_t j = 0; j < 64; ++j) spec.covariance_w[j] = 1.0 + 0.5 * std::sin(2 * pi * j / 64.0);

  std::vector<double> samples;
  double worst = 0.0;
  for (std::size_t i = 0; i < 4000; ++i) {
    Rng rng = make_stream(31, i);
    const auto s = sample_homogeneous_gaussian(lattice, spec, rng);
    const auto hat = lattice.psi_hat(s);
    double fourier = 0.0;
    for (std::size_t j = 0; j < 64; ++j) fourier += lattice.table().omega_prime[j] * std::norm(hat[j]);
    fourier /= 2 * pi * 64;
    const double j_tot = total_current(lattice, s);
    worst = std::max(worst, std::abs(j_tot - fourier));
    samples.push_back(j_tot);
  }
  CHECK(worst < 1e-11);

  // Energy flows toward increasing x where W favours positive velocities.
  const auto e = jackknife_mean(samples);
  const double predicted = 64.0 * mean_current_prediction(lattice, spec.covariance_w);
  CHECK(predicted > 0.0);
  CHECK(std::abs(e.value - predicted) < 4.0 * e.stderr_);
}

TEST_CASE("microscopic current correlation at lag zero") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  MicroCorrelationConfig cfg;
  cfg.lattice_size = 32;
  cfg.trajectories = 4000;
  cfg.lags = {0.0};
  cfg.origin_span = 0.0;
  cfg.temperature = 1.5;
  cfg.threads = 1;
  const auto c = micro_current_correlation(pinned, cfg);
  const auto table = dispersion(pinned, 32);
  double wick = 0.0;
  for (double v : table.omega_prime) wick += v * v;
  wick *= cfg.temperature * cfg.temperature / (4 * pi * pi * 32);
  CHECK(std::abs(c.value[0] - wick) < 4.0 * c.stderr_[0]);
}

TEST_CASE("total time covariance") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const OddSequence g{{1, 1.0}, {2, -0.4}};
  const auto gp = positive_part(g);
  CHECK(gp.size() == 2);
  const double temp = 1.2, gamma = 0.9;
  for (double t : {0.0, 1.0}) {
    const double dense = temp * temp * midpoint([&](double k) {
      const double h = odd_symbol(gp, k);
      const double w = pinned.omega(k);
      return h * h / (w * w) * std::exp(-gamma * CollisionKernel1D::phi(k) * t);
    }, 10000);
    CHECK(total_time_covariance(pinned, g, temp, gamma, t) == doctest::Approx(dense).epsilon(1e-8));
  }
  CHECK_THROWS_AS(positive_part(OddSequence{{1, 1.0}, {-1, 1.0}}), InadmissibleG);
  CHECK_THROWS_AS(positive_part(OddSequence{{0, 0.5}, {1, 1.0}}), InadmissibleG);
  CHECK(odd_symbol(gp, 0.25) == doctest::Approx(-2.0 * std::sin(pi / 2) + 0.8 * std::sin(pi)).epsilon(1e-14));
}

TEST_CASE("perturbed route at time zero") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const OddSequence g{{1, 1.0}};
  PerturbedRouteConfig cfg;
  cfg.lattice_size = 64;
  cfg.trajectories = 2000;
  cfg.times = {0.0};
  cfg.threads = 1;
  const auto r = micro_total_time_covariance(pinned, g, cfg);
  const double f0 = total_time_covariance(pinned, g, cfg.temperature, cfg.gamma, 0.0);
  REQUIRE(f0 > 0.0);
  const double v = r.extrapolated.value[0];
  CHECK(v > 0.0);
  CHECK(std::abs(v - f0) < 4.0 * r.extrapolated.stderr_[0] + 1e-3 * f0);
}

TEST_CASE("resolvent") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const OddSequence g{{1, 1.0}, {3, 0.25}};
  const double lambda = 0.8;
  const auto r0 = resolvent_f_lambda(pinned, g, lambda, 0.0, 1.0, 256);
  CHECK(r0.at(1) == doctest::Approx(1.0 / lambda).epsilon(1e-12));
  CHECK(r0.at(-3) == doctest::Approx(-0.25 / lambda).epsilon(1e-12));
  CHECK(std::abs(r0.at(2)) < 1e-13);

  const auto r = resolvent_f_lambda(pinned, g, lambda, 1.3, 1.0);
  CHECK(r.residual < 1e-10);
  CHECK(r.laplace_from_sequence == doctest::Approx(r.laplace_formula).epsilon(1e-8));
  CHECK(laplace_of_total_covariance(pinned, g, 1.0, 1.3, lambda) == doctest::Approx(r.laplace_formula).epsilon(1e-6));
}

TEST_CASE("conductivity") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const auto a = kappa0(pinned, 1.0);
  const auto b = kappa0(pinned, 2.0);
  REQUIRE(a.finite);
  CHECK(b.value == doctest::Approx(a.value / 2.0).epsilon(1e-12));
  CHECK(a.value == doctest::Approx(a.value_coarse).epsilon(1e-8));
  CHECK(green_kubo_integral(pinned, 1.0, 2.0) == doctest::Approx(a.value).epsilon(1e-6));

  const auto u = kappa0(build_coupling(NearestNeighbor{0.0, 1.0}), 1.0);
  CHECK_FALSE(u.finite);
  CHECK(u.cutoff_exponent == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("decay exponent fits") {
  const auto fit = decay_exponent([](double t) { return 3.0 / (t * t); }, 1.0, 100.0);
  CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(fit.power_law);
  CHECK(fit.ci_low <= fit.exponent);
  CHECK(fit.ci_high >= fit.exponent);

  const auto expo = decay_exponent([](double t) { return std::exp(-t); }, 1.0, 30.0);
  CHECK_FALSE(expo.power_law);

  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const auto c = decay_exponent([&](double t) { return kinetic_current_correlation(pinned, 1.0, 1.0, t); }, 100.0,
                                10000.0);
  CHECK(c.power_law);
  CHECK(c.exponent == doctest::Approx(-1.5).epsilon(0.02));

  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{1.0, 0.5, 0.3, 0.25};
  CHECK_THROWS_AS(decay_exponent(x, y, 10.0, 20.0), EmptyWindow);
}

TEST_CASE("ballistic spreading without noise") {
  const CouplingModel unpinned = build_coupling(NearestNeighbor{0.0, 1.0});
  const std::vector<double> times{10.0, 30.0, 100.0, 300.0, 1000.0};
  const auto r = superdiffusion_exponent(PhononProcess(unpinned, 0.0), times, 5000, 4, 1, 50);
  CHECK(r.fit.exponent == doctest::Approx(1.0).epsilon(0.01));
}
