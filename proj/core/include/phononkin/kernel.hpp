#pragma once

#include "phononkin/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace phononkin {

/// One-dimensional collision kernel of the momentum-exchange noise:
/// R(k, k') = (4/3)(2 s2(k) s1(k') + 2 s2(k') s1(k) - s2(k) s2(k')),
/// s1 = sin^2(pi k), s2 = sin^2(2 pi k).
class CollisionKernel1D {
public:
  static double R(double k, double kp) noexcept;
  /// -(4/3) sin^2(pi k)(1 + 2 cos^2(pi k)).
  static double beta_hat(double k) noexcept;
  /// Total jump rate, phi = -beta_hat.
  static double phi(double k) noexcept;
  /// Same rate written as (4/3)(s1 + s2 / 2).
  static double phi_from_sines(double k) noexcept;
  static double max_phi() noexcept { return 1.5; }
  /// sup over k' of R(k, k').
  static double max_rate(double k) noexcept;

  /// Draws k' with density R(k, .) / phi(k) on [0, 1) by rejection.
  static double sample(double k, Rng& rng);
};

/// Collision kernel in dimension d >= 2:
/// R(k, k') = 16 sum_l s1(k_l) s1(k'_l), phi(k) = 8 sum_l s1(k_l); a jump
/// also moves the polarization i to a uniform j != i.
class CollisionKernelDD {
public:
  explicit CollisionKernelDD(std::size_t dimension);

  std::size_t dimension() const noexcept { return d_; }
  double R(std::span<const double> k, std::span<const double> kp) const;
  double phi(std::span<const double> k) const;
  /// nu_{k,i}(j, dk') density: (1 - delta_ij) R(k, k') / (d - 1).
  double rate(std::span<const double> k, std::size_t i, std::size_t j, std::span<const double> kp) const;

  /// Replaces k with a draw from R(k, .) / phi(k) and returns a uniform j != i.
  std::size_t sample(std::span<double> k, std::size_t i, Rng& rng) const;

private:
  std::size_t d_;
};

/// Inverse of F(x) = x - sin(2 pi x) / (2 pi), the CDF of 2 sin^2(pi x) on [0, 1].
double inverse_sin2_cdf(double u);

}  // namespace phononkin
