#include "phononkin/kernel.hpp"

#include "phononkin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phononkin {

namespace {

constexpr double pi = std::numbers::pi;

double s1(double k) noexcept {
  const double s = std::sin(pi * k);
  return s * s;
}

double s2(double k) noexcept {
  const double s = std::sin(2.0 * pi * k);
  return s * s;
}

}  // namespace

double CollisionKernel1D::R(double k, double kp) noexcept {
  const double a2 = s2(k);
  const double b2 = s2(kp);
  return (4.0 / 3.0) * (2.0 * a2 * s1(kp) + 2.0 * b2 * s1(k) - a2 * b2);
}

double CollisionKernel1D::beta_hat(double k) noexcept {
  const double c = std::cos(pi * k);
  return -(4.0 / 3.0) * s1(k) * (1.0 + 2.0 * c * c);
}

double CollisionKernel1D::phi(double k) noexcept { return -beta_hat(k); }

double CollisionKernel1D::phi_from_sines(double k) noexcept { return (4.0 / 3.0) * (s1(k) + 0.5 * s2(k)); }

double CollisionKernel1D::max_rate(double k) noexcept {
  // With u = s1(k'), R = (4/3)((2 s2 + 4a) u - 4a u^2), a = 2 s1 (2 s1 - 1).
  const double a1 = s1(k);
  const double b = s2(k);
  const double a = 2.0 * a1 * (2.0 * a1 - 1.0);
  double u = 1.0;
  if (a > 0.0) {
    u = std::min(1.0, (2.0 * b + 4.0 * a) / (8.0 * a));
  }
  return (4.0 / 3.0) * ((2.0 * b + 4.0 * a) * u - 4.0 * a * u * u);
}

double CollisionKernel1D::sample(double k, Rng& rng) {
  const double bound = max_rate(k) * (1.0 + 1e-12);
  if (!(bound > 0.0)) {
    throw Error("no jumps from a wave number with zero rate");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    const double kp = unif(rng);
    if (unif(rng) * bound <= R(k, kp)) {
      return kp;
    }
  }
}

double inverse_sin2_cdf(double u) {
  if (u <= 0.0) {
    return 0.0;
  }
  if (u >= 1.0) {
    return 1.0;
  }
  double lo = 0.0;
  double hi = 1.0;
  double x = u;
  for (int it = 0; it < 100; ++it) {
    const double f = x - std::sin(2.0 * pi * x) / (2.0 * pi) - u;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double df = 2.0 * s1(x);
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) < 1e-15) {
      return next;
    }
    x = next;
  }
  return x;
}

CollisionKernelDD::CollisionKernelDD(std::size_t dimension) : d_(dimension) {
  if (d_ < 2) {
    throw Error("the multi-dimensional kernel needs d >= 2");
  }
}

double CollisionKernelDD::R(std::span<const double> k, std::span<const double> kp) const {
  double s = 0.0;
  for (std::size_t l = 0; l < d_; ++l) {
    s += s1(k[l]) * s1(kp[l]);
  }
  return 16.0 * s;
}

double CollisionKernelDD::phi(std::span<const double> k) const {
  double s = 0.0;
  for (std::size_t l = 0; l < d_; ++l) {
    s += s1(k[l]);
  }
  return 8.0 * s;
}

double CollisionKernelDD::rate(std::span<const double> k, std::size_t i, std::size_t j,
                               std::span<const double> kp) const {
  if (i == j) {
    return 0.0;
  }
  return R(k, kp) / static_cast<double>(d_ - 1);
}

std::size_t CollisionKernelDD::sample(std::span<double> k, std::size_t i, Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double total = 0.0;
  for (std::size_t l = 0; l < d_; ++l) {
    total += s1(k[l]);
  }
  if (!(total > 0.0)) {
    throw Error("no jumps from a wave number with zero rate");
  }
  // R(k, .) / phi(k) = sum_l [s1(k_l) / total] 2 s1(k'_l): pick l, then k'_l
  // from 2 sin^2, the other components uniform.
  const double pick = unif(rng) * total;
  std::size_t chosen = d_ - 1;
  double acc = 0.0;
  for (std::size_t l = 0; l < d_; ++l) {
    acc += s1(k[l]);
    if (pick < acc) {
      chosen = l;
      break;
    }
  }
  for (std::size_t l = 0; l < d_; ++l) {
    k[l] = l == chosen ? inverse_sin2_cdf(unif(rng)) : unif(rng);
  }
  std::uniform_int_distribution<std::size_t> other(0, d_ - 2);
  const std::size_t j = other(rng);
  return j >= i ? j + 1 : j;
}

}  // namespace phononkin
