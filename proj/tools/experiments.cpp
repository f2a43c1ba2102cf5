#include "runner.hpp"

#include "phononkin/boltzmann.hpp"
#include "phononkin/csv.hpp"
#include "phononkin/dynamics.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/kernel.hpp"
#include "phononkin/observables.hpp"
#include "phononkin/parallel.hpp"
#include "phononkin/phonon_mc.hpp"
#include "phononkin/quadrature.hpp"
#include "phononkin/transport.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

namespace phononkin::runner {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

// Initial spectral profile W0(k) / T shared by the chain experiments.
constexpr double profile_cos = 0.6;
constexpr double profile_sin = 0.3;
// Relative amplitude of the spatial modulation in wigner_transport.
constexpr double envelope_amplitude = 0.5;
// Reference Boltzmann step.
constexpr double boltzmann_dt = 1e-3;
// Time-origin grid of current_corr.
constexpr double origin_spacing = 0.05;
constexpr double origin_span = 40.0;

double profile(double k) { return 1.0 + profile_cos * std::cos(2 * pi * k) + profile_sin * std::sin(2 * pi * k); }

std::ofstream open_artifact(const RunConfig& cfg, ExperimentResult& result, const std::string& name) {
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  result.artifacts.push_back(name);
  return out;
}

void add_check(ExperimentResult& r, std::string name, double value, double tol) {
  r.checks.push_back({std::move(name), value, tol, value <= tol});
}

GaussianFieldSpec profile_spec(const Lattice& lattice, double temperature) {
  const std::size_t n = lattice.size();
  GaussianFieldSpec spec{std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    spec.covariance_w[j] = temperature * profile(static_cast<double>(j) / static_cast<double>(n));
  }
  return spec;
}

SdeConfig sde_config(const RunConfig& cfg) {
  SdeConfig sde;
  sde.epsilon = cfg.epsilon;
  sde.gamma = cfg.gamma;
  sde.dt = *cfg.dt;
  sde.horizon = cfg.times.empty() || cfg.times.back() <= 0.0 ? 1.0 : cfg.times.back();
  sde.seed = cfg.seed;
  return sde;
}

ExperimentResult spectrum_relax(const RunConfig& cfg, const CouplingModel& model, std::ostream& log) {
  ExperimentResult result;
  const std::size_t n = cfg.lattice_size;
  const Lattice lattice(model, n);
  const GaussianFieldSpec spec = profile_spec(lattice, cfg.temperature);
  const SdeConfig sde = sde_config(cfg);
  const InitialSampler sampler = [&](Rng& rng) { return sample_homogeneous_gaussian(lattice, spec, rng); };
  const Observer obs[] = {energy_spectrum_observer(cfg.epsilon)};
  log << "spectrum_relax: " << cfg.ensemble_size << " trajectories, N = " << n << '\n';
  const auto records = simulate_ensemble(lattice, sampler, sde, cfg.ensemble_size, obs, cfg.times, cfg.threads);

  double drift = 0.0;
  for (const auto& r : records) {
    for (double d : r.energy_drift) drift = std::max(drift, d);
  }
  std::vector<SpectralFunction> spectra;
  for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
    std::vector<std::vector<double>> samples;
    samples.reserve(records.size());
    for (const auto& r : records) samples.push_back(r.values[0][ti]);
    spectra.push_back(reduce_spectrum(samples));
  }
  {
    auto out = open_artifact(cfg, result, "E_eps_t.csv");
    write_csv(out, cfg.times, spectra);
  }

  const auto ref = solve_homogeneous(spec.covariance_w, cfg.gamma, cfg.times,
                                     {HomogeneousMethod::lines, boltzmann_dt});
  // Energy spectrum of a field with covariance W is (eps N / 2) W.
  const double scale = 0.5 * cfg.epsilon * static_cast<double>(n);
  double mass0 = 0.0;
  for (double v : spec.covariance_w) mass0 += v;
  double mass_err = 0.0;
  double min_w = 0.0;
  json l1 = json::array();
  {
    auto out = open_artifact(cfg, result, "boltzmann_t.csv");
    CsvWriter csv(out, {"t", "k", "w", "energy_scaled"});
    for (std::size_t ti = 0; ti < ref.times.size(); ++ti) {
      double mass = 0.0;
      double dist = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = ref.w[ti][j];
        csv.row({ref.times[ti], static_cast<double>(j) / static_cast<double>(n), w, scale * w});
        mass += w;
        min_w = std::min(min_w, w);
        dist += std::abs(spectra[ti].values[j].real() / scale - w);
      }
      mass_err = std::max(mass_err, std::abs(mass - mass0) / mass0);
      l1.push_back(dist / mass0);
    }
  }
  add_check(result, "chain_energy_conservation", drift, 1e-9);
  add_check(result, "boltzmann_mass_conservation", mass_err, 1e-10);
  add_check(result, "boltzmann_positivity", std::max(0.0, -min_w), 0.0);
  result.metrics["relative_l1_to_boltzmann"] = l1;
  result.metrics["parameters"] = {{"initial_profile", "T (1 + 0.6 cos 2 pi k + 0.3 sin 2 pi k)"},
                                  {"boltzmann_method", "lines"},
                                  {"boltzmann_dt", boltzmann_dt}};
  return result;
}

ExperimentResult wigner_transport(const RunConfig& cfg, const CouplingModel& model, std::ostream& log) {
  ExperimentResult result;
  const std::size_t n = cfg.lattice_size;
  const Lattice lattice(model, n);
  const GaussianFieldSpec spec = profile_spec(lattice, cfg.temperature);
  const SdeConfig sde = sde_config(cfg);
  const double length = cfg.epsilon * static_cast<double>(n);
  auto envelope = [&](double x) { return 1.0 + envelope_amplitude * std::cos(2 * pi * x / length); };

  // Microscopic side: homogeneous samples modulated in space by sqrt(envelope).
  log << "wigner_transport: " << cfg.ensemble_size << " trajectories, N = " << n << '\n';
  const std::size_t nt = cfg.times.size();
  std::vector<std::vector<ChainState>> states(nt, std::vector<ChainState>(cfg.ensemble_size));
  std::vector<double> drift(cfg.ensemble_size, 0.0);
  parallel_for(cfg.ensemble_size, cfg.threads, [&](std::size_t i) {
    Rng rng = make_stream(cfg.seed, i);
    ChainState s = sample_homogeneous_gaussian(lattice, spec, rng);
    auto field = lattice.psi(s);
    for (std::size_t y = 0; y < n; ++y) {
      field[y] *= std::sqrt(envelope(cfg.epsilon * static_cast<double>(y)));
    }
    s = lattice.from_psi(field);
    const double h0 = lattice.hamiltonian(s);
    Integrator integrator(lattice, sde);
    double now = 0.0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double target = cfg.times[ti] / cfg.epsilon;
      integrator.advance(s, target - now, rng);
      now = target;
      states[ti][i] = s;
    }
    drift[i] = std::abs(lattice.hamiltonian(s) - h0) / h0;
  });

  // Kinetic side: walkers with law proportional to envelope(x) W0(k).
  const PhononProcess process(model, cfg.gamma);
  const double w_bound = 1.0 + profile_cos + profile_sin;
  const double e_bound = 1.0 + envelope_amplitude;
  auto mu0 = [&](Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PhononWalker w;
    double x = 0.0;
    do {
      x = u(rng) * length;
    } while (u(rng) * e_bound > envelope(x));
    double k = 0.0;
    do {
      k = u(rng);
    } while (u(rng) * w_bound > profile(k));
    w.x = {x};
    w.k = {k};
    return w;
  };
  const auto walkers = simulate_phonon(process, mu0, cfg.walkers, cfg.times, cfg.seed ^ 0x5eedULL, cfg.threads);
  // Total kinetic energy: int envelope dx * int W0 dk = L T.
  const double weight = 0.5 * length * cfg.temperature / static_cast<double>(cfg.walkers);
  const double delta = length / static_cast<double>(cfg.x_cells);

  auto out = open_artifact(cfg, result, "wigner_t.csv");
  CsvWriter csv(out, {"t", "x", "k", "value", "stderr", "kinetic", "kinetic_stderr"});
  double partition_err = 0.0;
  double worst_z = 0.0;
  json per_time = json::array();
  const std::size_t cells = cfg.x_cells * cfg.k_bands;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    const WignerEstimate est = estimate_wigner(lattice, states[ti], cfg.epsilon, cfg.x_cells, cfg.k_bands);
    double mean_h = 0.0;
    for (const auto& s : states[ti]) mean_h += lattice.hamiltonian(s);
    mean_h /= static_cast<double>(states[ti].size());
    double total = 0.0;
    for (double v : est.values) total += v;
    const double expected = 0.5 * cfg.epsilon * mean_h;
    partition_err = std::max(partition_err, std::abs(total - expected) / expected);

    std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
    for (const auto& w : walkers[ti]) {
      double x = std::fmod(w.x[0], length);
      if (x < 0.0) x += length;
      double k = w.k[0] - std::floor(w.k[0]);
      const auto b = std::min(cfg.k_bands - 1, static_cast<std::size_t>(k * static_cast<double>(cfg.k_bands)));
      for (std::size_t c = 0; c < cfg.x_cells; ++c) {
        const double win = wigner_window(x, est.x_centers[c], delta, length);
        const double v = weight * win * win;
        sum[c * cfg.k_bands + b] += v;
        sumsq[c * cfg.k_bands + b] += v * v;
      }
    }
    double z_max = 0.0;
    const auto m = static_cast<double>(cfg.walkers);
    for (std::size_t c = 0; c < cfg.x_cells; ++c) {
      for (std::size_t b = 0; b < cfg.k_bands; ++b) {
        const std::size_t i = c * cfg.k_bands + b;
        // Standard error of a sum of m i.i.d. contributions.
        const double mean = sum[i] / m;
        const double se = std::sqrt(std::max(0.0, sumsq[i] / m - mean * mean) * m);
        csv.row({cfg.times[ti], est.x_centers[c], est.k_centers[b], est.values[i], est.stderr_[i], sum[i], se});
        const double s = std::hypot(est.stderr_[i], se);
        if (s > 0.0) z_max = std::max(z_max, std::abs(est.values[i] - sum[i]) / s);
      }
    }
    worst_z = std::max(worst_z, z_max);
    per_time.push_back({{"t", cfg.times[ti]}, {"max_deviation_in_se", z_max}});
  }
  add_check(result, "chain_energy_conservation", *std::max_element(drift.begin(), drift.end()), 1e-9);
  add_check(result, "wigner_partition_of_energy", partition_err, 1e-10);
  result.metrics["micro_vs_kinetic"] = per_time;
  result.metrics["parameters"] = {{"initial_profile", "T (1 + 0.6 cos 2 pi k + 0.3 sin 2 pi k)"},
                                  {"envelope", "1 + 0.5 cos(2 pi x / (eps N))"},
                                  {"kinetic_seed", cfg.seed ^ 0x5eedULL}};
  return result;
}

ExperimentResult current_corr(const RunConfig& cfg, const CouplingModel& model, std::ostream& log) {
  ExperimentResult result;
  for (double t : cfg.times) {
    const double r = t / origin_spacing;
    if (std::abs(r - std::round(r)) > 1e-9) {
      throw ConfigError("times", "current_corr lags must be multiples of 0.05");
    }
  }
  MicroCorrelationConfig mc;
  mc.temperature = cfg.temperature;
  mc.epsilon = cfg.epsilon;
  mc.gamma = cfg.gamma;
  mc.lattice_size = cfg.lattice_size;
  mc.trajectories = cfg.ensemble_size;
  mc.lags = cfg.times;
  mc.spacing = origin_spacing;
  mc.origin_span = origin_span;
  mc.dt = *cfg.dt;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  log << "current_corr: " << cfg.ensemble_size << " trajectories, N = " << cfg.lattice_size << '\n';
  const CorrelationSeries micro = micro_current_correlation(model, mc);

  std::vector<double> kinetic;
  for (double t : cfg.times) kinetic.push_back(kinetic_current_correlation(model, cfg.gamma, cfg.temperature, t));

  auto out = open_artifact(cfg, result, "current_corr.csv");
  CsvWriter csv(out, {"t", "micro", "stderr", "kinetic"});
  double max_rel = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    csv.row({cfg.times[i], micro.value[i], micro.stderr_[i], kinetic[i]});
    finite = finite && std::isfinite(micro.value[i]);
    if (kinetic[i] != 0.0) max_rel = std::max(max_rel, std::abs(micro.value[i] - kinetic[i]) / std::abs(kinetic[i]));
  }
  // Second divided differences of the kinetic prediction are nonnegative.
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < cfg.times.size(); ++i) {
    const double h0 = cfg.times[i] - cfg.times[i - 1];
    const double h1 = cfg.times[i + 1] - cfg.times[i];
    if (h0 <= 0.0 || h1 <= 0.0) continue;
    const double d2 = ((kinetic[i + 1] - kinetic[i]) / h1 - (kinetic[i] - kinetic[i - 1]) / h0) / (h0 + h1);
    worst = std::max(worst, -d2);
  }
  add_check(result, "kinetic_convexity", worst, 1e-10);
  add_check(result, "micro_finite", finite ? 0.0 : 1.0, 0.0);
  result.metrics["max_relative_deviation"] = max_rel;
  result.metrics["parameters"] = {{"origin_spacing", origin_spacing}, {"origin_span", origin_span}};
  return result;
}

ExperimentResult kappa(const RunConfig& cfg, const CouplingModel& model, std::ostream& log) {
  ExperimentResult result;
  log << "kappa: " << (model.pinned() ? "pinned" : "unpinned") << " chain\n";
  const Conductivity k = kappa0(model, cfg.gamma);
  if (k.finite) {
    const double gk = green_kubo_integral(model, cfg.gamma, cfg.temperature);
    auto out = open_artifact(cfg, result, "kappa.csv");
    CsvWriter csv(out, {"kappa", "kappa_coarse", "green_kubo"});
    csv.row({k.value, k.value_coarse, gk});
    add_check(result, "grid_convergence", std::abs(k.value - k.value_coarse) / k.value, 1e-8);
    add_check(result, "green_kubo_agreement", std::abs(gk - k.value) / k.value, 1e-6);
    result.metrics["kappa"] = k.value;
  } else {
    auto out = open_artifact(cfg, result, "kappa_cutoff.csv");
    CsvWriter csv(out, {"rho", "partial"});
    for (std::size_t i = 0; i < k.rho.size(); ++i) csv.row({k.rho[i], k.partial[i]});
    add_check(result, "cutoff_exponent", std::abs(k.cutoff_exponent + 1.0), 0.05);
    result.metrics["cutoff_exponent"] = k.cutoff_exponent;
  }
  return result;
}

ExperimentResult superdiffusion(const RunConfig& cfg, const CouplingModel& model, std::ostream& log) {
  ExperimentResult result;
  const PhononProcess process(model, cfg.gamma);
  log << "superdiffusion: " << cfg.walkers << " walkers\n";
  const auto sd = superdiffusion_exponent(process, cfg.times, cfg.walkers, cfg.seed, cfg.threads);
  auto out = open_artifact(cfg, result, "superdiffusion.csv");
  CsvWriter csv(out, {"t", "median_abs_x"});
  for (std::size_t i = 0; i < sd.times.size(); ++i) csv.row({sd.times[i], sd.median_abs_x[i]});

  double expected = 2.0 / 3.0;
  double tol = 0.05;
  if (cfg.gamma == 0.0) {
    expected = 1.0;
    tol = 0.01;
  } else if (model.pinned()) {
    expected = 0.5;
  }
  add_check(result, "growth_exponent", std::abs(sd.fit.exponent - expected), tol);
  result.metrics["exponent"] = sd.fit.exponent;
  result.metrics["exponent_ci"] = {sd.fit.ci_low, sd.fit.ci_high};
  result.metrics["expected_exponent"] = expected;
  result.metrics["fit_residual"] = sd.fit.residual;
  return result;
}

ExperimentResult kernel_checks(const RunConfig& cfg, std::ostream& log) {
  ExperimentResult result;
  log << "kernel_checks\n";
  using K = CollisionKernel1D;
  constexpr std::size_t grid = 256;
  double rate = 0.0, mass = 0.0, sym = 0.0, neg = 0.0, zero = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double k = static_cast<double>(i) / grid;
    const double s1 = std::sin(pi * k), s2 = std::sin(2 * pi * k);
    const double phi = K::phi(k);
    rate = std::max({rate, std::abs(phi - (4.0 / 3.0) * (s1 * s1 + 0.5 * s2 * s2)), std::abs(phi + K::beta_hat(k)),
                     std::abs(phi - K::phi_from_sines(k))});
    double s = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      const double kp = static_cast<double>(j) / grid;
      const double r = K::R(k, kp);
      s += r;
      sym = std::max({sym, std::abs(r - K::R(kp, k)), std::abs(r - K::R(1.0 - k, 1.0 - kp))});
      neg = std::max(neg, -r);
      zero = std::max(zero, std::abs(K::R(0.0, kp)));
    }
    mass = std::max(mass, std::abs(s / grid - phi));
  }
  add_check(result, "rate_identity", rate, 1e-12);
  add_check(result, "kernel_integrates_to_rate", mass, 1e-12);
  add_check(result, "kernel_symmetry", sym, 1e-14);
  add_check(result, "kernel_nonnegative", neg, 0.0);
  add_check(result, "kernel_vanishes_at_zero", zero, 1e-14);

  constexpr std::size_t n = 512;
  std::vector<double> one(n, 1.0), odd(n), sq(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / n;
    odd[j] = std::sin(2 * pi * k) + 0.5 * std::sin(6 * pi * k);
    sq[j] = std::sin(pi * k) * std::sin(pi * k);
  }
  double c_const = 0.0, c_odd = 0.0, c_sq = 0.0;
  const auto c1 = apply_collision(one);
  const auto co = apply_collision(odd);
  const auto cs = apply_collision(sq);
  constexpr std::size_t dense = 4096;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / n;
    c_const = std::max(c_const, std::abs(c1[j]));
    c_odd = std::max(c_odd, std::abs(co[j] + K::phi(k) * odd[j]));
    double s = 0.0;
    for (std::size_t m = 0; m < dense; ++m) {
      const double kp = (static_cast<double>(m) + 0.5) / dense;
      const double f = std::sin(pi * kp) * std::sin(pi * kp);
      s += K::R(k, kp) * (f - sq[j]);
    }
    c_sq = std::max(c_sq, std::abs(cs[j] - s / dense));
  }
  add_check(result, "collision_of_constant", c_const, 1e-12);
  add_check(result, "collision_of_odd", c_odd, 1e-12);
  add_check(result, "collision_dense_quadrature", c_sq, 1e-10);

  double cdf = 0.0;
  for (std::size_t i = 0; i <= 1000; ++i) {
    const double x = static_cast<double>(i) / 1000.0;
    const double u = x - std::sin(2 * pi * x) / (2 * pi);
    cdf = std::max(cdf, std::abs(inverse_sin2_cdf(u) - x));
  }
  add_check(result, "inverse_cdf_round_trip", cdf, 1e-12);

  const CollisionKernelDD kd(2);
  const std::array<double, 2> half{0.5, 0.5};
  add_check(result, "two_dimensional_values", std::max(std::abs(kd.R(half, half) - 32.0), std::abs(kd.phi(half) - 16.0)),
            1e-12);

  auto out = open_artifact(cfg, result, "kernel_checks.csv");
  out << "identity,max_error,tolerance,pass\n";
  for (const auto& c : result.checks) {
    out << c.name << ',' << format_double(c.value) << ',' << format_double(c.tolerance) << ','
        << (c.pass ? 1 : 0) << '\n';
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg, std::ostream& log) {
  if (cfg.experiment == "kernel_checks") {
    return kernel_checks(cfg, log);
  }
  const CouplingModel model = build_coupling(cfg.model);
  if (cfg.experiment == "spectrum_relax") return spectrum_relax(cfg, model, log);
  if (cfg.experiment == "wigner_transport") return wigner_transport(cfg, model, log);
  if (cfg.experiment == "current_corr") return current_corr(cfg, model, log);
  if (cfg.experiment == "kappa") return kappa(cfg, model, log);
  if (cfg.experiment == "superdiffusion") return superdiffusion(cfg, model, log);
  throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
}

}  // namespace phononkin::runner
