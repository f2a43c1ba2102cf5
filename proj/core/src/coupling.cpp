#include "phononkin/coupling.hpp"

#include "phononkin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace phononkin {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double zero_mode_tol = 1e-12;
constexpr std::size_t dense_samples = 8192;

double wrap_unit(double k) noexcept {
  double w = k - std::floor(k);
  return w >= 1.0 ? 0.0 : w;
}

DecayCertificate fit_decay(const std::vector<double>& alpha) {
  // Least squares of log|alpha(y)| against y over the nonzero entries.
  std::vector<double> ys;
  std::vector<double> logs;
  for (std::size_t y = 0; y < alpha.size(); ++y) {
    if (alpha[y] != 0.0) {
      ys.push_back(static_cast<double>(y));
      logs.push_back(std::log(std::abs(alpha[y])));
    }
  }
  double rate = 1.0;
  if (ys.size() >= 2) {
    const double n = static_cast<double>(ys.size());
    double sy = 0, sl = 0, syy = 0, syl = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      sy += ys[i];
      sl += logs[i];
      syy += ys[i] * ys[i];
      syl += ys[i] * logs[i];
    }
    const double slope = (n * syl - sy * sl) / (n * syy - sy * sy);
    rate = -slope;
  }
  if (!(rate > 0.0)) {
    throw AssumptionViolation(Assumption::a3,
                              "coefficients do not decay (fitted rate " + std::to_string(rate) + ")");
  }
  double c1 = 0.0;
  for (std::size_t y = 0; y < alpha.size(); ++y) {
    c1 = std::max(c1, std::abs(alpha[y]) * std::exp(rate * static_cast<double>(y)));
  }
  return {c1, rate};
}

}  // namespace

std::string to_string(Assumption item) {
  switch (item) {
    case Assumption::a1: return "a1";
    case Assumption::a2: return "a2";
    case Assumption::a3: return "a3";
    case Assumption::a4: return "a4";
  }
  return "?";
}

CouplingModel::CouplingModel(std::vector<double> one_sided) : alpha_(std::move(one_sided)) {
  if (alpha_.empty()) {
    throw AssumptionViolation(Assumption::a1, "empty coupling list");
  }
  for (double a : alpha_) {
    if (!std::isfinite(a)) {
      throw AssumptionViolation(Assumption::a3, "non-finite coefficient");
    }
  }
  while (alpha_.size() > 1 && alpha_.back() == 0.0) {
    alpha_.pop_back();
  }
  if (alpha_.size() < 2) {
    throw AssumptionViolation(Assumption::a1, "alpha(y) = 0 for every y != 0");
  }
  decay_ = fit_decay(alpha_);

  pinning_ = alpha_hat(0.0);
  if (pinning_ > zero_mode_tol) {
    kind_ = CouplingKind::pinned;
  } else if (pinning_ >= -zero_mode_tol) {
    kind_ = CouplingKind::unpinned;
    pinning_ = 0.0;
  } else {
    throw AssumptionViolation(Assumption::a4, "alpha_hat(0) < 0");
  }

  for (std::size_t j = 0; j < dense_samples; ++j) {
    const double k = static_cast<double>(j) / dense_samples;
    if (j == 0 && kind_ == CouplingKind::unpinned) {
      continue;
    }
    if (!(alpha_hat(k) > 0.0)) {
      throw AssumptionViolation(Assumption::a4,
                                "alpha_hat(" + std::to_string(k) + ") <= 0");
    }
  }
  if (kind_ == CouplingKind::unpinned) {
    const double h = 1e-3;
    const double second = (alpha_hat(h) - 2.0 * alpha_hat(0.0) + alpha_hat(-h)) / (h * h);
    if (!(second > 0.0)) {
      throw AssumptionViolation(Assumption::a4, "alpha_hat''(0) <= 0 in the unpinned case");
    }
    acoustic_speed_ = std::sqrt(alpha_hat_second(0.0) / 2.0);
  }

  for (std::size_t j = 0; j < dense_samples; ++j) {
    const double k = (static_cast<double>(j) + 0.5) / dense_samples;
    max_omega_prime_ = std::max(max_omega_prime_, std::abs(omega_prime(k)));
    max_omega_ = std::max(max_omega_, omega(k));
  }
  max_omega_prime_ = std::max(max_omega_prime_, acoustic_speed_);
  max_omega_ = std::max(max_omega_, omega(0.0));
}

double CouplingModel::alpha(int offset) const noexcept {
  const auto y = static_cast<std::size_t>(std::abs(offset));
  return y < alpha_.size() ? alpha_[y] : 0.0;
}

double CouplingModel::alpha_hat(double k) const noexcept {
  double s = alpha_[0];
  for (std::size_t y = 1; y < alpha_.size(); ++y) {
    s += 2.0 * alpha_[y] * std::cos(two_pi * k * static_cast<double>(y));
  }
  return s;
}

double CouplingModel::alpha_hat_prime(double k) const noexcept {
  double s = 0.0;
  for (std::size_t y = 1; y < alpha_.size(); ++y) {
    const double yd = static_cast<double>(y);
    s -= 2.0 * two_pi * yd * alpha_[y] * std::sin(two_pi * k * yd);
  }
  return s;
}

double CouplingModel::alpha_hat_second(double k) const noexcept {
  double s = 0.0;
  for (std::size_t y = 1; y < alpha_.size(); ++y) {
    const double yd = static_cast<double>(y);
    s -= 2.0 * two_pi * two_pi * yd * yd * alpha_[y] * std::cos(two_pi * k * yd);
  }
  return s;
}

double CouplingModel::omega(double k) const noexcept {
  return std::sqrt(std::max(alpha_hat(k), 0.0));
}

double CouplingModel::omega_prime(double k) const noexcept {
  const double w = wrap_unit(k);
  if (kind_ == CouplingKind::unpinned) {
    // Below this distance from 0 the ratio alpha_hat'/2 omega loses digits.
    constexpr double near_zero = 1e-7;
    if (w < near_zero) {
      return acoustic_speed_;
    }
    if (1.0 - w < near_zero) {
      return -acoustic_speed_;
    }
  }
  const double om = omega(w);
  if (om == 0.0) {
    return 0.0;
  }
  return alpha_hat_prime(w) / (2.0 * om);
}

CouplingModel build_coupling(const CouplingSpec& spec) {
  if (const auto* nn = std::get_if<NearestNeighbor>(&spec)) {
    if (!(nn->alpha1 > 0.0)) {
      throw AssumptionViolation(Assumption::a1, "nearest-neighbour preset requires alpha1 > 0");
    }
    if (!(nn->omega0_sq >= 0.0)) {
      throw AssumptionViolation(Assumption::a4, "pinning omega0^2 must be >= 0");
    }
    return CouplingModel({nn->omega0_sq + nn->alpha1, -0.5 * nn->alpha1});
  }

  const auto& list = std::get<CouplingList>(spec);
  int range = 0;
  for (const auto& [y, a] : list) {
    range = std::max(range, std::abs(y));
  }
  std::vector<double> one_sided(static_cast<std::size_t>(range) + 1, 0.0);
  for (int y = 0; y <= range; ++y) {
    const auto pos = list.find(y);
    const auto neg = list.find(-y);
    if (pos != list.end() && neg != list.end() && y != 0) {
      const double scale = std::max({std::abs(pos->second), std::abs(neg->second), 1e-300});
      if (std::abs(pos->second - neg->second) > 1e-14 * scale) {
        throw AssumptionViolation(Assumption::a2, "alpha(" + std::to_string(y) + ") != alpha(" +
                                                      std::to_string(-y) + ")");
      }
    }
    if (pos != list.end()) {
      one_sided[static_cast<std::size_t>(y)] = pos->second;
    } else if (neg != list.end()) {
      one_sided[static_cast<std::size_t>(y)] = neg->second;
    }
  }
  return CouplingModel(std::move(one_sided));
}

DispersionTable dispersion(const CouplingModel& model, std::size_t n) {
  if (n < 4 || n % 2 != 0) {
    throw Error("dispersion grid size must be even and >= 4, got " + std::to_string(n));
  }
  if (static_cast<std::size_t>(model.range()) * 4 > n) {
    throw AssumptionViolation(Assumption::a3, "coupling support " + std::to_string(model.range()) +
                                                  " exceeds N/4 for N = " + std::to_string(n));
  }
  DispersionTable table;
  table.n = n;
  table.k.resize(n);
  table.omega.resize(n);
  table.omega_prime.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(j) / static_cast<double>(n);
    table.k[j] = k;
    const double ah = model.alpha_hat(k);
    if (model.pinned() && !(ah > 0.0)) {
      throw DegenerateDispersion("omega vanishes at grid point k = " + std::to_string(k));
    }
    table.omega[j] = model.omega(k);
    table.omega_prime[j] = model.omega_prime(k);
  }
  // Enforce exact evenness on the grid.
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double w = 0.5 * (table.omega[j] + table.omega[n - j]);
    table.omega[j] = table.omega[n - j] = w;
    const double d = 0.5 * (table.omega_prime[j] - table.omega_prime[n - j]);
    table.omega_prime[j] = d;
    table.omega_prime[n - j] = -d;
  }
  table.omega_prime[n / 2] = 0.0;
  if (model.pinned()) {
    table.omega_prime[0] = 0.0;
  }
  return table;
}

}  // namespace phononkin
