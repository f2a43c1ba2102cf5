#include "phononkin/boltzmann.hpp"

#include "phononkin/errors.hpp"
#include "phononkin/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace phononkin {

namespace {

struct Grid {
  std::vector<double> s1, s2, phi;

  explicit Grid(std::size_t n) : s1(n), s2(n), phi(n) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = static_cast<double>(j) / static_cast<double>(n);
      const double a = std::sin(std::numbers::pi * k);
      const double b = std::sin(2.0 * std::numbers::pi * k);
      s1[j] = a * a;
      s2[j] = b * b;
      phi[j] = CollisionKernel1D::phi(k);
    }
  }
};

void collide(const Grid& g, std::span<const double> f, std::span<double> out) {
  const std::size_t n = f.size();
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ma += g.s1[j] * f[j];
    mb += g.s2[j] * f[j];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double gain = (4.0 / 3.0) * ((2.0 * ma - mb) * g.s2[j] + 2.0 * mb * g.s1[j]);
    out[j] = gain - g.phi[j] * f[j];
  }
}

void check_times(std::span<const double> times) {
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw Error("output times must be sorted and nonnegative");
  }
}

HomogeneousSolution solve_lines(const Grid& g, std::span<const double> w0, double gamma,
                                std::span<const double> times, double dt) {
  const std::size_t n = w0.size();
  HomogeneousSolution sol;
  std::vector<double> w(w0.begin(), w0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double now = 0.0;
  auto rhs = [&](std::span<const double> f, std::span<double> out) {
    collide(g, f, out);
    for (double& v : out) {
      v *= gamma;
    }
  };
  for (double t : times) {
    const double span_t = t - now;
    if (span_t > 0.0) {
      const auto steps = static_cast<std::size_t>(std::ceil(span_t / dt - 1e-9));
      const double h = span_t / static_cast<double>(steps);
      for (std::size_t s = 0; s < steps; ++s) {
        rhs(w, k1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] + 0.5 * h * k1[j];
        rhs(tmp, k2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] + 0.5 * h * k2[j];
        rhs(tmp, k3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = w[j] + h * k3[j];
        rhs(tmp, k4);
        for (std::size_t j = 0; j < n; ++j) {
          w[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
      }
    }
    now = std::max(now, t);
    sol.times.push_back(t);
    sol.w.push_back(w);
  }
  return sol;
}

// One trapezoid solve of m(t) = f(t) + gamma int_0^t K(t - s) m(s) ds on steps of h,
// followed by the Duhamel reconstruction at the output times.
std::vector<std::vector<double>> volterra_pass(const Grid& g, std::span<const double> w0, double gamma,
                                               std::span<const double> times, double h) {
  const std::size_t n = w0.size();
  const auto nd = static_cast<double>(n);
  const double t_max = times.empty() ? 0.0 : times.back();
  const auto steps = static_cast<std::size_t>(std::llround(t_max / h));

  std::vector<double> ga(n), gb(n);
  for (std::size_t j = 0; j < n; ++j) {
    ga[j] = (8.0 / 3.0) * g.s2[j];
    gb[j] = (4.0 / 3.0) * (2.0 * g.s1[j] - g.s2[j]);
  }
  // Kernel K(tau)_{ij} = <w_i, e^{-gamma phi tau} g_j>, forcing f(tau)_i = <w_i, e^{-gamma phi tau} W0>.
  using Mat = std::array<double, 4>;
  using Vec = std::array<double, 2>;
  std::vector<Mat> kern(steps + 1);
  std::vector<Vec> force(steps + 1);
  for (std::size_t s = 0; s <= steps; ++s) {
    Mat km{};
    Vec fv{};
    const double tau = static_cast<double>(s) * h;
    for (std::size_t j = 0; j < n; ++j) {
      const double e = std::exp(-gamma * g.phi[j] * tau);
      const double wa = g.s1[j] * e;
      const double wb = g.s2[j] * e;
      km[0] += wa * ga[j];
      km[1] += wa * gb[j];
      km[2] += wb * ga[j];
      km[3] += wb * gb[j];
      fv[0] += wa * w0[j];
      fv[1] += wb * w0[j];
    }
    for (double& v : km) v /= nd;
    for (double& v : fv) v /= nd;
    kern[s] = km;
    force[s] = fv;
  }
  std::vector<Vec> m(steps + 1);
  m[0] = force[0];
  const double c = gamma * h;
  const Mat& k0 = kern[0];
  const double a00 = 1.0 - 0.5 * c * k0[0];
  const double a01 = -0.5 * c * k0[1];
  const double a10 = -0.5 * c * k0[2];
  const double a11 = 1.0 - 0.5 * c * k0[3];
  const double det = a00 * a11 - a01 * a10;
  for (std::size_t s = 1; s <= steps; ++s) {
    Vec rhs = force[s];
    const Mat& kn = kern[s];
    rhs[0] += 0.5 * c * (kn[0] * m[0][0] + kn[1] * m[0][1]);
    rhs[1] += 0.5 * c * (kn[2] * m[0][0] + kn[3] * m[0][1]);
    for (std::size_t i = 1; i < s; ++i) {
      const Mat& kk = kern[s - i];
      rhs[0] += c * (kk[0] * m[i][0] + kk[1] * m[i][1]);
      rhs[1] += c * (kk[2] * m[i][0] + kk[3] * m[i][1]);
    }
    m[s] = {(a11 * rhs[0] - a01 * rhs[1]) / det, (a00 * rhs[1] - a10 * rhs[0]) / det};
  }

  std::vector<std::vector<double>> out;
  for (double t : times) {
    const auto st = static_cast<std::size_t>(std::llround(t / h));
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double rate = gamma * g.phi[j];
      double acc = 0.0;
      for (std::size_t i = 0; i <= st; ++i) {
        const double weight = (i == 0 || i == st) ? 0.5 : 1.0;
        const double e = std::exp(-rate * static_cast<double>(st - i) * h);
        acc += weight * e * (ga[j] * m[i][0] + gb[j] * m[i][1]);
      }
      if (st == 0) {
        acc = 0.0;
      }
      w[j] = std::exp(-rate * t) * w0[j] + gamma * h * acc;
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::vector<double> apply_collision(std::span<const double> f) {
  const Grid g(f.size());
  std::vector<double> out(f.size());
  collide(g, f, out);
  return out;
}

SpectralFunction apply_collision(const SpectralFunction& f) {
  return SpectralFunction::from_real(apply_collision(f.real()));
}

HomogeneousSolution solve_homogeneous(std::span<const double> w0, double gamma, std::span<const double> times,
                                      const HomogeneousOptions& options) {
  if (w0.size() < 4) {
    throw Error("grid needs at least four points");
  }
  if (!options.allow_signed) {
    for (double v : w0) {
      if (!(v >= 0.0)) {
        throw NonPositiveInitial("initial spectral density must be nonnegative");
      }
    }
  }
  if (!(gamma >= 0.0)) {
    throw Error("gamma must be nonnegative");
  }
  check_times(times);
  const Grid g(w0.size());
  if (options.method == HomogeneousMethod::lines) {
    double dt = options.dt;
    if (dt <= 0.0) {
      dt = gamma > 0.0 ? 0.5 / (gamma * CollisionKernel1D::max_phi()) : 1.0;
    }
    return solve_lines(g, w0, gamma, times, dt);
  }
  const double h = options.dt > 0.0 ? options.dt : 1e-3;
  for (double t : times) {
    const double r = t / h;
    if (std::abs(r - std::round(r)) > 1e-6) {
      throw Error("volterra output times must be multiples of the step");
    }
  }
  const auto coarse = volterra_pass(g, w0, gamma, times, h);
  const auto fine = volterra_pass(g, w0, gamma, times, 0.5 * h);
  HomogeneousSolution sol;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> w(w0.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
    }
    sol.times.push_back(times[i]);
    sol.w.push_back(std::move(w));
  }
  return sol;
}

}  // namespace phononkin
