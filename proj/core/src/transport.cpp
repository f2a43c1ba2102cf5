#include "phononkin/transport.hpp"

#include "phononkin/csv.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/kernel.hpp"
#include "phononkin/observables.hpp"
#include "phononkin/parallel.hpp"
#include "phononkin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace phononkin {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t wrap(long i, std::size_t n) {
  const auto m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

std::size_t steps_of(double t, double spacing) {
  const double r = t / spacing;
  if (r < -1e-9 || std::abs(r - std::round(r)) > 1e-6) {
    throw Error("times must be nonnegative multiples of the spacing");
  }
  return static_cast<std::size_t>(std::llround(r));
}

double median(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) {
    return hi;
  }
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

// |g_hat(k)| / omega(k), with the k -> 0 limit for acoustic models.
double g_over_omega(const CouplingModel& model, const std::map<int, double>& gp, double k) {
  const double w = model.omega(k);
  const double h = odd_symbol(gp, k);
  if (w > 0.0) {
    return h / w;
  }
  // h ~ -4 pi k sum z g(z), omega ~ c k as k -> 0+.
  double slope = 0.0;
  for (const auto& [z, gz] : gp) {
    slope -= 4.0 * pi * z * gz;
  }
  return model.acoustic_speed() > 0.0 ? slope / model.acoustic_speed() : 0.0;
}

// int_T f(k) exp(-rate phi(k)) dk for f even in k. Since phi >= (4/3) sin^2(pi k),
// the factor is below e^{-60} outside |k| < k_c, so only that window is integrated.
double integrate_decaying(const std::function<double(double)>& f, double rate) {
  auto g = [&](double k) { return f(k) * std::exp(-rate * CollisionKernel1D::phi(k)); };
  const double s = rate > 0.0 ? std::sqrt(45.0 / rate) : 2.0;
  if (s >= 1.0) {
    return integrate_torus(g);
  }
  return 2.0 * integrate(g, 0.0, std::asin(s) / pi);
}

}  // namespace

void write_csv(std::ostream& out, const CorrelationSeries& series) {
  CsvWriter csv(out, {"t", "value", "stderr"});
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    csv.row({series.t[i], series.value[i], series.stderr_.empty() ? 0.0 : series.stderr_[i]});
  }
}

double total_current(const Lattice& lattice, const ChainState& state) {
  const std::size_t n = lattice.size();
  const CouplingModel& model = lattice.model();
  double total = 0.0;
  for (int z = 1; z <= model.range(); ++z) {
    // z and -z contribute equally after summing over translations.
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t xz = wrap(static_cast<long>(x) + z, n);
      s += state.q[xz] * state.p[x] - state.q[x] * state.p[xz];
    }
    total += 0.5 * z * model.alpha(z) * s;
  }
  return total;
}

double mean_current_prediction(const Lattice& lattice, std::span<const double> w) {
  const auto& table = lattice.table();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    s += table.omega_prime[j] * w[j];
  }
  return s / (2.0 * pi * static_cast<double>(w.size()));
}

double kinetic_current_correlation(const CouplingModel& model, double gamma, double temperature, double t) {
  const double integral = integrate_decaying(
      [&](double k) {
        const double v = model.omega_prime(k);
        return v * v;
      },
      gamma * std::abs(t));
  return temperature * temperature / (4.0 * pi * pi) * integral;
}

CorrelationSeries micro_current_correlation(const CouplingModel& model, const MicroCorrelationConfig& cfg) {
  const Lattice lattice(model, cfg.lattice_size);
  SdeConfig sde;
  sde.epsilon = cfg.epsilon;
  sde.gamma = cfg.gamma;
  sde.dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(model, cfg.epsilon, cfg.gamma);
  sde.seed = cfg.seed;
  std::vector<std::size_t> lag_steps;
  std::size_t max_lag = 0;
  for (double l : cfg.lags) {
    lag_steps.push_back(steps_of(l, cfg.spacing));
    max_lag = std::max(max_lag, lag_steps.back());
  }
  const std::size_t origins = steps_of(cfg.origin_span, cfg.spacing) + 1;
  std::vector<double> times(origins + max_lag);
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = static_cast<double>(i) * cfg.spacing;
  }
  sde.horizon = times.back() > 0.0 ? times.back() : 1.0;
  const auto spec = equilibrium(lattice, cfg.temperature);
  const InitialSampler sampler = [&](Rng& rng) { return sample_homogeneous_gaussian(lattice, spec, rng); };
  const Observer observers[] = {{"current", [](const Lattice& l, const ChainState& s) {
                                   return std::vector<double>{total_current(l, s)};
                                 }}};
  const auto records = simulate_ensemble(lattice, sampler, sde, cfg.trajectories, observers, times, cfg.threads);

  const auto nd = static_cast<double>(cfg.lattice_size);
  CorrelationSeries out;
  for (std::size_t li = 0; li < lag_steps.size(); ++li) {
    std::vector<double> per(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& j = records[r].values[0];
      double s = 0.0;
      for (std::size_t o = 0; o < origins; ++o) {
        s += j[o][0] * j[o + lag_steps[li]][0];
      }
      per[r] = s / (static_cast<double>(origins) * nd);
    }
    const Estimate e = jackknife_mean(per);
    out.t.push_back(cfg.lags[li]);
    out.value.push_back(e.value);
    out.stderr_.push_back(e.stderr_);
  }
  return out;
}

std::map<int, double> positive_part(const OddSequence& g) {
  std::map<int, double> out;
  for (const auto& [z, v] : g) {
    if (z == 0) {
      if (v != 0.0) {
        throw InadmissibleG("g(0) must vanish for an odd sequence");
      }
      continue;
    }
    const auto mirror = g.find(-z);
    if (mirror != g.end() && mirror->second != -v) {
      throw InadmissibleG("g is not odd at offset " + std::to_string(z));
    }
    if (z > 0) {
      out[z] = v;
    } else if (mirror == g.end()) {
      out[-z] = -v;
    }
  }
  if (out.empty()) {
    throw InadmissibleG("g is identically zero");
  }
  return out;
}

double odd_symbol(const std::map<int, double>& g_positive, double k) {
  double h = 0.0;
  for (const auto& [z, gz] : g_positive) {
    h -= 2.0 * gz * std::sin(2.0 * pi * k * z);
  }
  return h;
}

double total_time_covariance(const CouplingModel& model, const OddSequence& g, double temperature, double gamma,
                             double t) {
  const auto gp = positive_part(g);
  if (!model.pinned() && !(model.acoustic_speed() > 0.0)) {
    throw InadmissibleG("g_hat / omega is unbounded at k = 0");
  }
  const double integral = integrate_decaying(
      [&](double k) {
        const double r = g_over_omega(model, gp, k);
        return r * r;
      },
      gamma * t);
  return temperature * temperature * integral;
}

double phi_observable(const std::map<int, double>& g_positive, const ChainState& state) {
  const std::size_t n = state.size();
  double s = 0.0;
  for (const auto& [z, gz] : g_positive) {
    // g(z) p_{y+z} q_y + g(-z) p_{y-z} q_y
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      acc += (state.p[wrap(static_cast<long>(y) + z, n)] - state.p[wrap(static_cast<long>(y) - z, n)]) * state.q[y];
    }
    s += gz * acc;
  }
  return s / static_cast<double>(n);
}

PerturbedRouteResult micro_total_time_covariance(const CouplingModel& model, const OddSequence& g,
                                                 const PerturbedRouteConfig& cfg) {
  const auto gp = positive_part(g);
  std::map<int, double> tilt;
  for (const auto& [z, v] : gp) {
    tilt[z] = -v;
  }
  const Lattice lattice(model, cfg.lattice_size);
  SdeConfig sde;
  sde.epsilon = cfg.epsilon;
  sde.gamma = cfg.gamma;
  sde.dt = cfg.dt > 0.0 ? cfg.dt : default_time_step(model, cfg.epsilon, cfg.gamma);
  sde.horizon = cfg.times.empty() ? 1.0 : std::max(cfg.times.back(), 1e-12);
  sde.seed = cfg.seed;
  sde.validate();
  if (!std::is_sorted(cfg.times.begin(), cfg.times.end())) {
    throw Error("sample times must be sorted");
  }
  // Under the e^{-2 pi i k z} transform the tilt exp(tau sum_z tau_z Phi)
  // has covariance omega / (omega / T - i tau g_hat), i.e. the formula at -g.
  const auto base = equilibrium(lattice, cfg.temperature);
  std::vector<GaussianFieldSpec> specs;
  for (double tau : cfg.taus) {
    specs.push_back(perturbed_covariance(lattice, tilt, cfg.temperature, tau));
  }
  const std::size_t nt = cfg.times.size();
  const std::size_t ntau = cfg.taus.size();
  // diff[r][tau][time]
  std::vector<std::vector<std::vector<double>>> diff(cfg.trajectories,
                                                     std::vector<std::vector<double>>(ntau, std::vector<double>(nt)));
  parallel_for(cfg.trajectories, cfg.threads, [&](std::size_t r) {
    Integrator integrator(lattice, sde);
    auto run = [&](const GaussianFieldSpec& spec) {
      Rng rng = make_stream(cfg.seed, r);
      ChainState state = sample_homogeneous_gaussian(lattice, spec, rng);
      std::vector<double> vals;
      double now = 0.0;
      for (double t : cfg.times) {
        integrator.advance(state, t / cfg.epsilon - now, rng);
        now = t / cfg.epsilon;
        vals.push_back(phi_observable(gp, state));
      }
      return vals;
    };
    const auto ref = run(base);
    for (std::size_t a = 0; a < ntau; ++a) {
      const auto v = run(specs[a]);
      for (std::size_t i = 0; i < nt; ++i) {
        diff[r][a][i] = (v[i] - ref[i]) / cfg.taus[a];
      }
    }
  });

  PerturbedRouteResult out;
  for (std::size_t a = 0; a < ntau; ++a) {
    CorrelationSeries s;
    for (std::size_t i = 0; i < nt; ++i) {
      std::vector<double> col(cfg.trajectories);
      for (std::size_t r = 0; r < cfg.trajectories; ++r) {
        col[r] = diff[r][a][i];
      }
      const Estimate e = jackknife_mean(col);
      s.t.push_back(cfg.times[i]);
      s.value.push_back(e.value);
      s.stderr_.push_back(e.stderr_);
    }
    out.per_tau.push_back(std::move(s));
  }
  if (ntau == 2 && std::abs(cfg.taus[0] - 2.0 * cfg.taus[1]) < 1e-12 * cfg.taus[0]) {
    for (std::size_t i = 0; i < nt; ++i) {
      std::vector<double> col(cfg.trajectories);
      for (std::size_t r = 0; r < cfg.trajectories; ++r) {
        col[r] = 2.0 * diff[r][1][i] - diff[r][0][i];
      }
      const Estimate e = jackknife_mean(col);
      out.extrapolated.t.push_back(cfg.times[i]);
      out.extrapolated.value.push_back(e.value);
      out.extrapolated.stderr_.push_back(e.stderr_);
    }
  }
  return out;
}

Resolvent resolvent_f_lambda(const CouplingModel& model, const OddSequence& g, double lambda, double gamma,
                             double temperature, std::size_t n) {
  if (!(lambda > 0.0)) {
    throw Error("lambda must be positive");
  }
  const auto gp = positive_part(g);
  if (gp.rbegin()->first >= static_cast<int>(n / 2)) {
    throw Error("lattice too small for the support of g");
  }
  const Dft dft(n);
  std::vector<Complex> gs(n), fh(n);
  for (const auto& [z, v] : gp) {
    gs[wrap(z, n)] = v;
    gs[wrap(-z, n)] = -v;
  }
  dft.forward(gs, fh);
  const std::vector<Complex> g_hat = fh;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / static_cast<double>(n);
    fh[j] /= lambda + gamma * CollisionKernel1D::phi(k);
  }
  std::vector<Complex> f(n);
  dft.inverse(fh, f);

  Resolvent out;
  out.n = n;
  out.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long z = static_cast<long>(i) - static_cast<long>(n / 2);
    out.f[i] = f[wrap(z, n)].real();
  }
  auto fz = [&](long z) { return f[wrap(z, n)].real(); };
  for (long z = 0; z < static_cast<long>(n); ++z) {
    auto u = [&](long y) { return 4.0 * fz(y) + fz(y + 1) + fz(y - 1); };
    const double lap = u(z + 1) + u(z - 1) - 2.0 * u(z);
    const double res = lambda * fz(z) - gamma / 6.0 * lap - gs[wrap(z, n)].real();
    out.residual = std::max(out.residual, std::abs(res));
  }

  out.laplace_formula = temperature * temperature * integrate_torus([&](double k) {
                          const double r = g_over_omega(model, gp, k);
                          return r * r / (lambda + gamma * CollisionKernel1D::phi(k));
                        });
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / static_cast<double>(n);
    const double w = model.omega(k);
    if (w > 0.0) {
      s += (std::conj(fh[j]) * g_hat[j]).real() / (w * w);
    } else if (!model.pinned()) {
      const double r = g_over_omega(model, gp, k);
      s += r * r / lambda;
    }
  }
  out.laplace_from_sequence = temperature * temperature * s / static_cast<double>(n);
  return out;
}

double laplace_of_total_covariance(const CouplingModel& model, const OddSequence& g, double temperature,
                                   double gamma, double lambda) {
  return integrate_half_line([&](double t) {
    return std::exp(-lambda * t) * total_time_covariance(model, g, temperature, gamma, t);
  });
}

Conductivity kappa0(const CouplingModel& model, double gamma) {
  if (!(gamma > 0.0)) {
    throw Error("gamma must be positive");
  }
  auto integrand = [&](double k) {
    const double v = model.omega_prime(k);
    return v * v / (gamma * CollisionKernel1D::phi(k));
  };
  Conductivity out;
  if (model.pinned()) {
    auto midpoint = [&](std::size_t m) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        s += integrand((static_cast<double>(j) + 0.5) / static_cast<double>(m));
      }
      return s / static_cast<double>(m) / (4.0 * pi * pi);
    };
    out.finite = true;
    out.value_coarse = midpoint(std::size_t{1} << 12);
    out.value = midpoint(std::size_t{1} << 13);
    return out;
  }
  out.finite = false;
  const std::size_t points = 21;
  for (std::size_t i = 0; i < points; ++i) {
    const double rho = std::pow(10.0, -4.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    // Symmetric cutoff rho < |k| <= 1/2.
    const double partial = 2.0 * integrate(integrand, rho, 0.5) / (4.0 * pi * pi);
    out.rho.push_back(rho);
    out.partial.push_back(partial);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < points; ++i) {
    lx.push_back(std::log(out.rho[i]));
    ly.push_back(std::log(out.partial[i]));
  }
  out.cutoff_exponent = fit_line(lx, ly).slope;
  return out;
}

double green_kubo_integral(const CouplingModel& model, double gamma, double temperature) {
  const double t2 = temperature * temperature;
  return integrate_half_line(
      [&](double t) { return kinetic_current_correlation(model, gamma, temperature, t) / t2; }, 1e-12);
}

SuperdiffusionResult superdiffusion_exponent(const PhononProcess& process, std::span<const double> times,
                                             std::size_t walkers, std::uint64_t seed, unsigned threads,
                                             std::size_t resamples) {
  if (process.dimension() != 1) {
    throw Error("superdiffusion is measured for the chain");
  }
  if (times.size() < 3 || !std::is_sorted(times.begin(), times.end()) || !(times.front() > 0.0)) {
    throw EmptyWindow("need at least three increasing positive times");
  }
  const std::size_t nt = times.size();
  std::vector<double> absx(walkers * nt);
  constexpr std::size_t chunk = 1024;
  const std::size_t chunks = (walkers + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = make_stream(seed, c);
    const std::size_t end = std::min(walkers, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      PhononWalker w = uniform_walker(1, rng);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        process.advance(w, times[ti], rng);
        absx[i * nt + ti] = std::abs(w.x[0]);
      }
    }
  });

  SuperdiffusionResult out;
  out.times.assign(times.begin(), times.end());
  std::vector<double> col(walkers);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t i = 0; i < walkers; ++i) {
      col[i] = absx[i * nt + ti];
    }
    out.median_abs_x.push_back(median(col));
  }
  out.fit = decay_exponent(out.times, out.median_abs_x, times.front(), times.back(), 1e-1, 0);

  Rng rng = make_stream(seed, chunks + 1);
  std::uniform_int_distribution<std::size_t> pick(0, walkers - 1);
  std::vector<std::size_t> idx(walkers);
  std::vector<double> slopes;
  std::vector<double> lx(nt), ly(nt);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (auto& i : idx) {
      i = pick(rng);
    }
    for (std::size_t ti = 0; ti < nt; ++ti) {
      for (std::size_t i = 0; i < walkers; ++i) {
        col[i] = absx[idx[i] * nt + ti];
      }
      lx[ti] = std::log(times[ti]);
      ly[ti] = std::log(median(col));
    }
    slopes.push_back(fit_line(lx, ly).slope);
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    out.fit.ci_low = slopes[static_cast<std::size_t>(0.025 * static_cast<double>(slopes.size()))];
    out.fit.ci_high = slopes[std::min(slopes.size() - 1, static_cast<std::size_t>(0.975 * static_cast<double>(slopes.size())))];
  }
  return out;
}

double phonon_position_variance(const CouplingModel& model, double gamma, double t) {
  return 2.0 * integrate_torus([&](double k) {
    const double v = model.omega_prime(k) / (2.0 * pi);
    const double r = gamma * CollisionKernel1D::phi(k);
    const double rt = r * t;
    // t / r - (1 - e^{-rt}) / r^2 = t^2 (rt - 1 + e^{-rt}) / (rt)^2
    double g;
    if (rt < 1e-4) {
      g = t * t * (0.5 - rt / 6.0 + rt * rt / 24.0);
    } else {
      g = t * t * (rt - 1.0 + std::exp(-rt)) / (rt * rt);
    }
    return v * v * g;
  });
}

}  // namespace phononkin
