#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

namespace phononkin {

enum class CouplingKind { pinned, unpinned };

/// Constants (C1, C2) with |alpha(y)| <= C1 exp(-C2 |y|) on the stored support.
struct DecayCertificate {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Nearest-neighbour chain: omega(k)^2 = omega0^2 + alpha1 (1 - cos 2 pi k).
struct NearestNeighbor {
  double omega0_sq = 0.0;
  double alpha1 = 1.0;
};

/// Explicit coupling list, offset -> alpha(offset). Missing mirror entries are completed.
using CouplingList = std::map<int, double>;

using CouplingSpec = std::variant<NearestNeighbor, CouplingList>;

/// Validated, symmetric, finitely supported harmonic coupling alpha(y).
///
/// alpha_hat(k) = sum_y alpha(y) exp(-2 pi i k y) is real and even; the
/// dispersion relation is omega = sqrt(alpha_hat). Wave numbers are read
/// modulo 1. Instances are immutable and safe to share across threads.
class CouplingModel {
public:
  /// One-sided coefficients alpha(0), alpha(1), ..., alpha(range). Validates (a1)-(a4).
  explicit CouplingModel(std::vector<double> one_sided);

  int range() const noexcept { return static_cast<int>(alpha_.size()) - 1; }
  double alpha(int offset) const noexcept;
  const std::vector<double>& one_sided() const noexcept { return alpha_; }

  CouplingKind kind() const noexcept { return kind_; }
  bool pinned() const noexcept { return kind_ == CouplingKind::pinned; }
  /// omega0^2 = alpha_hat(0).
  double pinning() const noexcept { return pinning_; }
  const DecayCertificate& decay() const noexcept { return decay_; }

  double alpha_hat(double k) const noexcept;
  double alpha_hat_prime(double k) const noexcept;
  double alpha_hat_second(double k) const noexcept;

  double omega(double k) const noexcept;
  /// Group velocity times 2 pi. In the unpinned case omega' jumps at k = 0;
  /// the value at k = 0 is the right limit sqrt(alpha_hat''(0) / 2).
  double omega_prime(double k) const noexcept;
  /// Slope of omega at 0+ (zero for pinned models).
  double acoustic_speed() const noexcept { return acoustic_speed_; }

  /// Upper bound of |omega'| over the torus, from a dense sample.
  double max_omega_prime() const noexcept { return max_omega_prime_; }
  double max_omega() const noexcept { return max_omega_; }

private:
  std::vector<double> alpha_;
  CouplingKind kind_ = CouplingKind::pinned;
  double pinning_ = 0.0;
  double acoustic_speed_ = 0.0;
  double max_omega_prime_ = 0.0;
  double max_omega_ = 0.0;
  DecayCertificate decay_;
};

CouplingModel build_coupling(const CouplingSpec& spec);

/// omega and omega' tabulated on the grid {j/N}.
struct DispersionTable {
  std::size_t n = 0;
  std::vector<double> k;
  std::vector<double> omega;
  std::vector<double> omega_prime;
};

/// Requires N >= 4, N even, and coupling support |y| <= N/4.
DispersionTable dispersion(const CouplingModel& model, std::size_t n);

}  // namespace phononkin
