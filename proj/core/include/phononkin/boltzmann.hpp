#pragma once

#include "phononkin/spectral_function.hpp"

#include <span>
#include <vector>

namespace phononkin {

/// (Cf)(k_j) = (1/N) sum_j' R(k_j, k_j') (f(k_j') - f(k_j)) on the grid {j/N}.
/// The gain term uses the rank-2 form
/// G = (4/3)((2 m_a - m_b) s2 + 2 m_b s1), m_a = <s1, f>, m_b = <s2, f>.
/// The rectangle rule integrates R(k, .) to phi(k) exactly, so mass is
/// conserved to roundoff.
std::vector<double> apply_collision(std::span<const double> f);
SpectralFunction apply_collision(const SpectralFunction& f);

enum class HomogeneousMethod { lines, volterra };

struct HomogeneousOptions {
  HomogeneousMethod method = HomogeneousMethod::lines;
  /// Time step; 0 selects 0.5 / (gamma max phi) for lines and 1e-3 for volterra.
  double dt = 0.0;
  /// Signed data (e.g. an odd part) is accepted only when set.
  bool allow_signed = false;
};

/// Solution of d/dt W = gamma C W at the requested times.
struct HomogeneousSolution {
  std::vector<double> times;
  std::vector<std::vector<double>> w;
};

/// Lines: classical RK4 on the grid. Volterra: the two gain moments solve a
/// 2x2 Volterra equation of the second kind (trapezoid rule, Richardson
/// extrapolated from h and h/2); W(t) is then rebuilt from the Duhamel form.
/// Output times must be nonnegative and sorted; for volterra they must be
/// multiples of the step. Throws NonPositiveInitial for negative data.
HomogeneousSolution solve_homogeneous(std::span<const double> w0, double gamma, std::span<const double> times,
                                      const HomogeneousOptions& options = {});

}  // namespace phononkin
