#include "phononkin/dynamics.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace phononkin;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<ChainState> ensemble(const Lattice& lattice, const GaussianFieldSpec& spec, std::size_t m,
                                 std::uint64_t seed) {
  std::vector<ChainState> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = make_stream(seed, i);
    out.push_back(sample_homogeneous_gaussian(lattice, spec, rng));
  }
  return out;
}

GaussianFieldSpec profile(const Lattice& lattice) {
  const std::size_t n = lattice.size();
  GaussianFieldSpec spec{std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / static_cast<double>(n);
    spec.covariance_w[j] = 1.0 + 0.6 * std::cos(2 * pi * k) + 0.3 * std::sin(2 * pi * k);
  }
  return spec;
}

}  // namespace

TEST_CASE("equilibrium sampler") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 16);
  const auto states = ensemble(lattice, equilibrium(lattice, 1.0), 10000, 5);
  std::vector<double> psi2, p2;
  for (const auto& s : states) {
    psi2.push_back(std::norm(lattice.psi(s)[0]));
    p2.push_back(s.p[0] * s.p[0]);
  }
  const auto a = jackknife_mean(psi2);
  const auto b = jackknife_mean(p2);
  CHECK(std::abs(a.value - 1.0) < 3.0 * a.stderr_);
  CHECK(std::abs(b.value - 1.0) < 3.0 * b.stderr_);

  GaussianFieldSpec zero{std::vector<double>(16, 0.0)};
  Rng rng = make_stream(1, 0);
  const auto z = sample_homogeneous_gaussian(lattice, zero, rng);
  for (std::size_t y = 0; y < 16; ++y) {
    CHECK(z.q[y] == 0.0);
    CHECK(z.p[y] == 0.0);
  }

  GaussianFieldSpec negative{std::vector<double>(16, 1.0)};
  negative.covariance_w[3] = -0.1;
  CHECK_THROWS_AS(sample_homogeneous_gaussian(lattice, negative, rng), NegativeCovariance);
}

TEST_CASE("sampled Fourier covariance matches the target") {
  constexpr std::size_t n = 64;
  constexpr std::size_t m = 100000;
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), n);
  const auto spec = profile(lattice);
  std::vector<double> s(n), s2(n), re(n), re2(n), im(n), im2(n);
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = make_stream(17, i);
    const auto hat = lattice.psi_hat(sample_homogeneous_gaussian(lattice, spec, rng));
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::norm(hat[j]) / n;
      const Complex pair = hat[j] * hat[(n - j) % n] / static_cast<double>(n);
      s[j] += a;
      s2[j] += a * a;
      re[j] += pair.real();
      re2[j] += pair.real() * pair.real();
      im[j] += pair.imag();
      im2[j] += pair.imag() * pair.imag();
    }
  }
  auto z = [&](double sum, double sumsq, double target) {
    const double mean = sum / m;
    const double se = std::sqrt((sumsq / m - mean * mean) / m);
    return std::abs(mean - target) / se;
  };
  double worst_cov = 0.0, worst_pair = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    worst_cov = std::max(worst_cov, z(s[j], s2[j], spec.covariance_w[j]));
    worst_pair = std::max({worst_pair, z(re[j], re2[j], 0.0), z(im[j], im2[j], 0.0)});
  }
  CHECK(worst_cov < 4.0);
  CHECK(worst_pair < 4.0);
}

TEST_CASE("perturbed covariance") {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 64);
  const std::map<int, double> gradient{{1, 1.0}};
  const auto w = perturbed_covariance(lattice, gradient, 1.0, 0.01);
  for (double v : w.covariance_w) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  // Even part equals the equilibrium value to first order in tau.
  for (std::size_t j = 1; j < 32; ++j) {
    CHECK(0.5 * (w.covariance_w[j] + w.covariance_w[64 - j]) == doctest::Approx(1.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(perturbed_covariance(lattice, gradient, 1.0, 10.0), NegativeCovariance);
}

TEST_CASE("energy spectrum") {
  constexpr std::size_t n = 32;
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), n);
  std::vector<Complex> hat(n, Complex{});
  const Complex a{0.6, -1.1};
  hat[5] = a;
  const auto single = energy_spectrum_sample(lattice, lattice.from_psi_hat(hat), 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(single[j] == doctest::Approx(j == 5 ? std::norm(a) / 2.0 : 0.0).epsilon(1e-12));
  }

  const double eps = 0.1;
  const auto states = ensemble(lattice, profile(lattice), 500, 9);
  const auto spec = estimate_energy_spectrum(lattice, states, eps);
  double mean_h = 0.0;
  for (const auto& s : states) mean_h += lattice.hamiltonian(s) / states.size();
  CHECK(spec.integral() == doctest::Approx(0.5 * eps * mean_h).epsilon(1e-12));
  for (std::size_t j = 0; j < n; ++j) CHECK(spec.values[j].real() >= 0.0);

  // Harmonic flow leaves every |psi_hat(k)|^2 unchanged.
  double worst = 0.0;
  for (const auto& s : states) {
    const auto before = energy_spectrum_sample(lattice, s, eps);
    const auto after = energy_spectrum_sample(lattice, harmonic_flow(lattice, s, 3.7), eps);
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(after[j] - before[j]) / (before[j] + 1e-300));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("Y field vanishes for supported measures") {
  constexpr std::size_t n = 32;
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), n);
  auto states = ensemble(lattice, profile(lattice), 2000, 12);
  auto max_z = [&](const SpectralFunction& y) {
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      z = std::max({z, std::abs(y.values[j].real()) / y.stderr_[j], std::abs(y.values[j].imag()) / y.stderr_[j]});
    }
    return z;
  };
  CHECK(max_z(estimate_Y_field(lattice, states, 0.1)) < 4.5);
  for (auto& s : states) harmonic_flow(lattice, s, 10.0);
  CHECK(max_z(estimate_Y_field(lattice, states, 0.1)) < 4.5);
}

TEST_CASE("Wigner estimator") {
  const double eps = 0.1;
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), 256);
  const auto states = ensemble(lattice, profile(lattice), 400, 21);
  constexpr std::size_t cells = 8, bands = 8;
  const auto w = estimate_wigner(lattice, states, eps, cells, bands);

  // Summing the k bands gives (eps/2) sum_y e_y w_c(eps y)^2 exactly.
  const double length = eps * 256.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double direct = 0.0;
    for (const auto& s : states) {
      const auto e = local_energy(lattice, s);
      for (std::size_t y = 0; y < 256; ++y) {
        const double win = wigner_window(eps * y, w.x_centers[c], length / cells, length);
        direct += 0.5 * eps * e[y] * win * win;
      }
    }
    direct /= static_cast<double>(states.size());
    double sum = 0.0;
    for (std::size_t b = 0; b < bands; ++b) sum += w.at(c, b);
    CHECK(sum == doctest::Approx(direct).epsilon(1e-12));
  }

  // Homogeneous ensemble: no x dependence, and the x marginal is the spectrum.
  const auto spectrum = estimate_energy_spectrum(lattice, states, eps);
  for (std::size_t b = 0; b < bands; ++b) {
    double mean = 0.0;
    for (std::size_t c = 0; c < cells; ++c) mean += w.at(c, b) / cells;
    for (std::size_t c = 0; c < cells; ++c) {
      CHECK(std::abs(w.at(c, b) - mean) < 5.0 * w.stderr_[c * bands + b]);
    }
    double marginal = 0.0, band = 0.0, se2 = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      marginal += w.at(c, b);
      se2 += w.stderr_[c * bands + b] * w.stderr_[c * bands + b];
    }
    for (std::size_t j = b * 32; j < (b + 1) * 32; ++j) band += spectrum.values[j].real() / 256.0;
    CHECK(std::abs(marginal - band) < 5.0 * std::sqrt(se2));
  }

  CHECK_THROWS_AS(estimate_wigner(lattice, states, eps, 64, 8), ResolutionError);
}

TEST_CASE("Wigner estimate of a wave packet") {
  const double eps = 0.05;
  constexpr std::size_t n = 1024;
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), n);
  const double x0 = 25.6, sigma = 2.0, k0 = 4.5 / 16.0;
  std::vector<Complex> field(n);
  for (std::size_t y = 0; y < n; ++y) {
    const double x = eps * y;
    field[y] = std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma)) * std::polar(1.0, 2 * pi * k0 * y);
  }
  const std::vector<ChainState> one{lattice.from_psi(field)};
  const auto w = estimate_wigner(lattice, one, eps, 16, 16);
  double total = 0.0, inside = 0.0;
  for (std::size_t c = 0; c < 16; ++c) {
    for (std::size_t b = 0; b < 16; ++b) {
      total += w.at(c, b);
      if (std::abs(w.x_centers[c] - x0) <= 3.3 && b >= 3 && b <= 5) inside += w.at(c, b);
    }
  }
  CHECK(inside / total > 0.9);
}

TEST_CASE("jackknife of a mean is the classical standard error") {
  const std::vector<double> x{1.0, 2.5, -0.3, 4.1, 0.7, 2.2};
  const auto e = jackknife_mean(x);
  double mean = 0.0;
  for (double v : x) mean += v / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean) / (x.size() - 1);
  CHECK(e.value == doctest::Approx(mean).epsilon(1e-14));
  CHECK(e.stderr_ == doctest::Approx(std::sqrt(var / x.size())).epsilon(1e-12));
}
