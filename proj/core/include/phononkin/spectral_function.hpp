#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

namespace phononkin {

/// Function sampled on the uniform grid {j/N} of the torus [0, 1).
struct SpectralFunction {
  std::vector<std::complex<double>> values;
  /// Per-point standard error; empty when not estimated.
  std::vector<double> stderr_;

  SpectralFunction() = default;
  explicit SpectralFunction(std::size_t n) : values(n) {}

  static SpectralFunction from_real(const std::vector<double>& v);
  static SpectralFunction tabulate(std::size_t n, const std::function<double(double)>& f);

  std::size_t size() const noexcept { return values.size(); }
  double k(std::size_t j) const noexcept { return static_cast<double>(j) / static_cast<double>(size()); }
  std::vector<double> real() const;
  /// Grid sum / N of the real part.
  double integral() const;
};

/// Grid-sum / N of |a - b| (real parts).
double l1_distance(const SpectralFunction& a, const SpectralFunction& b);

/// Columns k, value_re, value_im, stderr.
void write_csv(std::ostream& out, const SpectralFunction& f);

/// Time-stacked blocks with a leading t column.
void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<SpectralFunction>& fs);

}  // namespace phononkin
