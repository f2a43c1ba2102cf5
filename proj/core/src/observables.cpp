#include "phononkin/observables.hpp"

#include "phononkin/errors.hpp"

#include <cmath>
#include <numbers>

namespace phononkin {

namespace {

constexpr Complex imag_unit{0.0, 1.0};

struct Moments {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

SpectralFunction finish(const Moments& m, std::size_t count) {
  const std::size_t n = m.sum.size();
  SpectralFunction f(n);
  f.stderr_.assign(n, 0.0);
  const auto c = static_cast<double>(count);
  for (std::size_t j = 0; j < n; ++j) {
    const double mean = m.sum[j] / c;
    f.values[j] = mean;
    if (count > 1) {
      const double var = std::max(0.0, (m.sumsq[j] - c * mean * mean) / (c - 1.0));
      f.stderr_[j] = std::sqrt(var / c);
    }
  }
  return f;
}

}  // namespace

Estimate jackknife(std::size_t n, const std::function<double(std::size_t)>& estimator) {
  if (n == 0) {
    throw Error("jackknife needs at least one unit");
  }
  const double full = estimator(n);
  if (n == 1) {
    return {full, 0.0};
  }
  std::vector<double> loo(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = estimator(i);
    mean += loo[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : loo) {
    ss += (v - mean) * (v - mean);
  }
  const auto nd = static_cast<double>(n);
  return {full, std::sqrt((nd - 1.0) / nd * ss)};
}

Estimate jackknife_mean(std::span<const double> samples) {
  const std::size_t n = samples.size();
  double total = 0.0;
  for (double v : samples) {
    total += v;
  }
  return jackknife(n, [&](std::size_t skip) {
    if (skip >= n) {
      return total / static_cast<double>(n);
    }
    return (total - samples[skip]) / static_cast<double>(n - 1);
  });
}

void validate(const GaussianFieldSpec& spec, const Lattice& lattice) {
  if (spec.covariance_w.size() != lattice.size()) {
    throw Error("covariance grid does not match lattice");
  }
  for (std::size_t j = 0; j < spec.covariance_w.size(); ++j) {
    const double w = spec.covariance_w[j];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw NegativeCovariance("covariance is negative or not finite at k = " +
                               std::to_string(static_cast<double>(j) / static_cast<double>(lattice.size())));
    }
  }
}

ChainState sample_homogeneous_gaussian(const Lattice& lattice, const GaussianFieldSpec& spec, Rng& rng) {
  validate(spec, lattice);
  const std::size_t n = lattice.size();
  const auto nd = static_cast<double>(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> psi_hat(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi_hat[j] = std::sqrt(nd * spec.covariance_w[j]) * Complex(re, im) / std::numbers::sqrt2;
  }
  if (!lattice.model().pinned()) {
    const double p0 = std::sqrt(nd * spec.covariance_w[0]) * normal(rng);
    psi_hat[0] = imag_unit * p0 / std::numbers::sqrt2;
  }
  return lattice.from_psi_hat(psi_hat, 0.0);
}

GaussianFieldSpec equilibrium(const Lattice& lattice, double temperature) {
  if (!(temperature >= 0.0)) {
    throw NegativeCovariance("temperature must be nonnegative");
  }
  return {std::vector<double>(lattice.size(), temperature)};
}

GaussianFieldSpec perturbed_covariance(const Lattice& lattice, const std::map<int, double>& g_positive,
                                       double temperature, double tau) {
  const auto& table = lattice.table();
  const std::size_t n = lattice.size();
  GaussianFieldSpec spec{std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double k = table.k[j];
    double h = 0.0;
    for (const auto& [z, gz] : g_positive) {
      if (z <= 0) {
        throw Error("odd sequence is given by its positive offsets");
      }
      h -= 2.0 * gz * std::sin(2.0 * std::numbers::pi * k * z);
    }
    const double w = table.omega[j];
    if (w <= 0.0) {
      spec.covariance_w[j] = temperature;
      continue;
    }
    const double denom = 1.0 / temperature - tau * h / w;
    if (!(denom > 0.0)) {
      throw NegativeCovariance("perturbed covariance is not positive; tau is too large");
    }
    spec.covariance_w[j] = 1.0 / denom;
  }
  return spec;
}

std::vector<double> energy_spectrum_sample(const Lattice& lattice, const ChainState& state, double epsilon) {
  const auto hat = lattice.psi_hat(state);
  std::vector<double> out(hat.size());
  for (std::size_t j = 0; j < hat.size(); ++j) {
    out[j] = 0.5 * epsilon * std::norm(hat[j]);
  }
  return out;
}

SpectralFunction reduce_spectrum(std::span<const std::vector<double>> samples) {
  if (samples.empty()) {
    throw Error("ensemble is empty");
  }
  const std::size_t n = samples.front().size();
  Moments m{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < n; ++j) {
      m.sum[j] += s[j];
      m.sumsq[j] += s[j] * s[j];
    }
  }
  return finish(m, samples.size());
}

SpectralFunction estimate_energy_spectrum(const Lattice& lattice, std::span<const ChainState> ensemble,
                                          double epsilon) {
  std::vector<std::vector<double>> samples;
  samples.reserve(ensemble.size());
  for (const auto& s : ensemble) {
    samples.push_back(energy_spectrum_sample(lattice, s, epsilon));
  }
  return reduce_spectrum(samples);
}

SpectralFunction estimate_Y_field(const Lattice& lattice, std::span<const ChainState> ensemble, double epsilon) {
  if (ensemble.empty()) {
    throw Error("ensemble is empty");
  }
  const std::size_t n = lattice.size();
  std::vector<Complex> sum(n);
  std::vector<double> sumsq(n, 0.0);
  for (const auto& s : ensemble) {
    const auto hat = lattice.psi_hat(s);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = 0.5 * epsilon * hat[j] * hat[(n - j) % n];
      sum[j] += v;
      sumsq[j] += std::norm(v);
    }
  }
  const auto c = static_cast<double>(ensemble.size());
  SpectralFunction f(n);
  f.stderr_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    f.values[j] = sum[j] / c;
    if (ensemble.size() > 1) {
      const double var = std::max(0.0, (sumsq[j] - c * std::norm(f.values[j])) / (c - 1.0));
      f.stderr_[j] = std::sqrt(var / c);
    }
  }
  return f;
}

double wigner_window(double x, double center, double delta, double length) {
  double d = x - center;
  d -= length * std::round(d / length);
  if (std::abs(d) >= delta) {
    return 0.0;
  }
  return std::cos(std::numbers::pi * d / (2.0 * delta));
}

WignerEstimate estimate_wigner(const Lattice& lattice, std::span<const ChainState> ensemble, double epsilon,
                               std::size_t x_cells, std::size_t k_band_count) {
  if (ensemble.empty()) {
    throw Error("ensemble is empty");
  }
  const std::size_t n = lattice.size();
  if (x_cells < 2 || k_band_count < 1 || k_band_count > n) {
    throw Error("need at least two x cells and between 1 and N k bands");
  }
  if (n / x_cells < k_band_count) {
    throw ResolutionError("each x window spans " + std::to_string(n / x_cells) + " sites, fewer than " +
                          std::to_string(k_band_count) + " k bands");
  }
  const double length = epsilon * static_cast<double>(n);
  const double delta = length / static_cast<double>(x_cells);

  WignerEstimate est;
  est.bands = k_band_count;
  for (std::size_t c = 0; c < x_cells; ++c) {
    est.x_centers.push_back(static_cast<double>(c) * delta);
  }
  for (std::size_t b = 0; b < k_band_count; ++b) {
    est.k_centers.push_back((static_cast<double>(b) + 0.5) / static_cast<double>(k_band_count));
  }
  std::vector<std::size_t> band_of(n);
  for (std::size_t j = 0; j < n; ++j) {
    band_of[j] = j * k_band_count / n;
  }
  std::vector<std::vector<double>> window(x_cells, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < x_cells; ++c) {
    for (std::size_t y = 0; y < n; ++y) {
      window[c][y] = wigner_window(epsilon * static_cast<double>(y), est.x_centers[c], delta, length);
    }
  }

  const std::size_t cells = x_cells * k_band_count;
  std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0), one(cells);
  std::vector<Complex> buf(n);
  const double scale = 0.5 * epsilon / static_cast<double>(n);
  for (const auto& state : ensemble) {
    const auto field = lattice.psi(state);
    std::fill(one.begin(), one.end(), 0.0);
    for (std::size_t c = 0; c < x_cells; ++c) {
      for (std::size_t y = 0; y < n; ++y) {
        buf[y] = window[c][y] * field[y];
      }
      lattice.dft().forward(buf, buf);
      for (std::size_t j = 0; j < n; ++j) {
        one[c * k_band_count + band_of[j]] += scale * std::norm(buf[j]);
      }
    }
    for (std::size_t i = 0; i < cells; ++i) {
      sum[i] += one[i];
      sumsq[i] += one[i] * one[i];
    }
  }
  const auto m = static_cast<double>(ensemble.size());
  est.values.resize(cells);
  est.stderr_.assign(cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    est.values[i] = sum[i] / m;
    if (ensemble.size() > 1) {
      const double var = std::max(0.0, (sumsq[i] - m * est.values[i] * est.values[i]) / (m - 1.0));
      est.stderr_[i] = std::sqrt(var / m);
    }
  }
  return est;
}

Observer energy_spectrum_observer(double epsilon) {
  return {"energy_spectrum", [epsilon](const Lattice& lattice, const ChainState& state) {
            return energy_spectrum_sample(lattice, state, epsilon);
          }};
}

}  // namespace phononkin
