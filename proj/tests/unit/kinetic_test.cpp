#include "phononkin/boltzmann.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/kernel.hpp"
#include "phononkin/phonon_mc.hpp"
#include "phononkin/transport.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

using namespace phononkin;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> grid(std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(static_cast<double>(j) / n);
  return v;
}

double chi_square(const std::vector<double>& counts, const std::vector<double>& expected) {
  double chi = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    chi += (counts[i] - expected[i]) * (counts[i] - expected[i]) / expected[i];
  }
  return chi;
}

}  // namespace

TEST_CASE("collision operator on the grid") {
  constexpr std::size_t n = 256;
  for (double v : apply_collision(std::vector<double>(n, 2.5))) CHECK(std::abs(v) < 1e-13);

  const auto odd = grid(n, [](double k) { return std::sin(2 * pi * k) + 0.3 * std::sin(6 * pi * k); });
  const auto c = apply_collision(odd);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(c[j] == doctest::Approx(-CollisionKernel1D::phi(static_cast<double>(j) / n) * odd[j]).epsilon(1e-12));
  }

  // Rank-2 gain against a direct double sum.
  constexpr std::size_t m = 4096;
  const auto f = grid(m, [](double k) { return 1.0 + 0.5 * std::cos(2 * pi * k) + 0.2 * std::sin(4 * pi * k); });
  const auto fast = apply_collision(f);
  double worst = 0.0;
  for (std::size_t j = 0; j < m; j += 97) {
    const double k = static_cast<double>(j) / m;
    double direct = 0.0;
    for (std::size_t i = 0; i < m; ++i) direct += CollisionKernel1D::R(k, static_cast<double>(i) / m) * (f[i] - f[j]);
    worst = std::max(worst, std::abs(direct / m - fast[j]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("homogeneous Boltzmann solver") {
  constexpr std::size_t n = 128;
  const std::vector<double> times{0.0, 0.5, 1.0, 2.0};
  HomogeneousOptions opt;
  opt.dt = 1e-3;

  const auto flat = solve_homogeneous(std::vector<double>(n, 1.7), 1.0, times, opt);
  for (const auto& w : flat.w) {
    for (double v : w) CHECK(v == doctest::Approx(1.7).epsilon(1e-12));
  }

  // Odd data decay mode by mode at rate gamma phi.
  const auto odd = grid(n, [](double k) { return std::sin(2 * pi * k); });
  opt.allow_signed = true;
  const double gamma = 1.3;
  const auto sol = solve_homogeneous(odd, gamma, times, opt);
  double err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = static_cast<double>(j) / n;
      err = std::max(err, std::abs(sol.w[i][j] - odd[j] * std::exp(-gamma * CollisionKernel1D::phi(k) * times[i])));
    }
  }
  CHECK(err < 1e-8);

  opt.allow_signed = false;
  const auto w0 = grid(n, [](double k) { return 1.0 + 0.6 * std::cos(2 * pi * k) + 0.3 * std::sin(2 * pi * k); });
  for (auto method : {HomogeneousMethod::lines, HomogeneousMethod::volterra}) {
    opt.method = method;
    const auto s = solve_homogeneous(w0, 1.0, times, opt);
    double mass0 = 0.0;
    for (double v : w0) mass0 += v / n;
    for (const auto& w : s.w) {
      double mass = 0.0;
      for (double v : w) {
        mass += v / n;
        CHECK(v >= 0.0);
      }
      CHECK(std::abs(mass - mass0) < 1e-10);
    }
  }

  auto bad = w0;
  bad[7] = -0.1;
  CHECK_THROWS_AS(solve_homogeneous(bad, 1.0, times, opt), NonPositiveInitial);
}

TEST_CASE("kernel sampling") {
  constexpr std::size_t bins = 20;
  constexpr std::size_t draws = 100000;
  const double k = 0.3;
  std::vector<double> counts(bins), expected(bins);
  Rng rng = make_stream(3, 0);
  for (std::size_t i = 0; i < draws; ++i) {
    const double kp = CollisionKernel1D::sample(k, rng);
    REQUIRE(kp >= 0.0);
    REQUIRE(kp < 1.0);
    counts[static_cast<std::size_t>(kp * bins)] += 1.0;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    double mass = 0.0;
    for (int s = 0; s < 200; ++s) mass += CollisionKernel1D::R(k, (b + (s + 0.5) / 200.0) / bins) / (200.0 * bins);
    expected[b] = draws * mass / CollisionKernel1D::phi(k);
  }
  // 19 degrees of freedom; 45 is the 0.9993 quantile.
  CHECK(chi_square(counts, expected) < 45.0);

  const CollisionKernelDD dd(3);
  for (std::size_t i = 0; i < 1000; ++i) {
    std::array<double, 3> kv{0.1, 0.4, 0.7};
    const std::size_t from = i % 3;
    const std::size_t to = dd.sample(kv, from, rng);
    CHECK(to != from);
    CHECK(to < 3);
    for (double c : kv) CHECK((c >= 0.0 && c < 1.0));
  }

  for (double u : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    const double x = inverse_sin2_cdf(u);
    CHECK(x - std::sin(2 * pi * x) / (2 * pi) == doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("phonon jump process") {
  const CouplingModel pinned = build_coupling(NearestNeighbor{1.0, 1.0});
  const PhononProcess process(pinned, 2.0);

  SUBCASE("dwell time") {
    const double k0 = 0.2;
    std::vector<double> first;
    for (std::size_t i = 0; i < 20000; ++i) {
      Rng rng = make_stream(5, i);
      PhononWalker w{{0.0}, {k0}, 0, 0.0};
      double hit = -1.0;
      process.advance(w, 100.0, rng, [&](const PhononWalker& e) {
        if (hit < 0.0) hit = e.t;
      });
      first.push_back(hit);
    }
    double mean = 0.0;
    for (double t : first) mean += t / first.size();
    const double expected = 1.0 / (2.0 * CollisionKernel1D::phi(k0));
    // Exponential: sd equals the mean.
    CHECK(std::abs(mean - expected) < 4.0 * expected / std::sqrt(first.size()));
  }

  SUBCASE("uniform law is stationary and balanced") {
    constexpr std::size_t bins = 4;
    std::vector<double> counts(bins);
    std::array<std::array<double, bins>, bins> flow{};
    for (std::size_t i = 0; i < 20000; ++i) {
      Rng rng = make_stream(6, i);
      PhononWalker w = uniform_walker(1, rng);
      std::size_t prev = static_cast<std::size_t>(w.k[0] * bins);
      process.advance(w, 3.0, rng, [&](const PhononWalker& e) {
        const auto next = static_cast<std::size_t>(e.k[0] * bins);
        flow[prev][next] += 1.0;
        prev = next;
      });
      counts[static_cast<std::size_t>(w.k[0] * bins)] += 1.0;
    }
    CHECK(chi_square(counts, std::vector<double>(bins, 20000.0 / bins)) < 16.3);
    for (std::size_t a = 0; a < bins; ++a) {
      for (std::size_t b = a + 1; b < bins; ++b) {
        CHECK(std::abs(flow[a][b] - flow[b][a]) < 4.0 * std::sqrt(flow[a][b] + flow[b][a]));
      }
    }
  }

  SUBCASE("ballistic without noise") {
    const PhononProcess free(pinned, 0.0);
    Rng rng = make_stream(7, 0);
    PhononWalker w{{0.5}, {0.13}, 0, 0.0};
    free.advance(w, 4.0, rng);
    CHECK(w.x[0] == doctest::Approx(0.5 + 4.0 * free.velocity(0.13)).epsilon(1e-14));
    CHECK(w.k[0] == 0.13);
  }

  SUBCASE("time zero returns the initial law") {
    const auto walkers = solve_inhomogeneous_mc(
        process, [](Rng&) { return PhononWalker{{1.5}, {0.2}, 0, 0.0}; }, 0.0, 100, 1, 1);
    for (const auto& w : walkers) {
      CHECK(w.x[0] == 1.5);
      CHECK(w.k[0] == 0.2);
    }
  }

  SUBCASE("position variance") {
    const double t = 5.0;
    const std::vector<double> times{t};
    const auto out = simulate_phonon(process, [](Rng& r) { return uniform_walker(1, r); }, 40000, times, 8, 1);
    double m2 = 0.0, m4 = 0.0;
    for (const auto& w : out[0]) {
      m2 += w.x[0] * w.x[0] / out[0].size();
      m4 += std::pow(w.x[0], 4) / out[0].size();
    }
    const double exact = phonon_position_variance(pinned, 2.0, t);
    CHECK(std::abs(m2 - exact) < 4.0 * std::sqrt((m4 - m2 * m2) / out[0].size()));

    const double k0 = kappa0(pinned, 2.0).value;
    const double far = 1e6;
    CHECK(phonon_position_variance(pinned, 2.0, far) / (2.0 * k0 * far) == doctest::Approx(1.0).epsilon(0.01));
  }
}
