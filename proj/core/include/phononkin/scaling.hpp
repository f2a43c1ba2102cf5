#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace phononkin {

/// Least-squares power-law fit y ~ A x^exponent on a log-log scale.
struct ScalingFit {
  std::vector<double> abscissae;
  std::vector<double> ordinates;
  double exponent = 0.0;
  double prefactor = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double window_low = 0.0;
  double window_high = 0.0;
  /// Root-mean-square residual of log y.
  double residual = 0.0;
  /// residual below the acceptance threshold.
  bool power_law = false;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits the points with x in [lo, hi]. The 95% interval comes from a pair
/// bootstrap with a fixed seed. Throws EmptyWindow with fewer than three
/// points in the window and Error on nonpositive ordinates there.
ScalingFit decay_exponent(std::span<const double> x, std::span<const double> y, double lo, double hi,
                          double residual_threshold = 1e-2, std::size_t resamples = 1000,
                          std::uint64_t seed = 20240601);

/// Samples f at `points` log-spaced abscissae of [lo, hi] and fits them.
ScalingFit decay_exponent(const std::function<double(double)>& f, double lo, double hi, std::size_t points = 41,
                          double residual_threshold = 1e-2);

}  // namespace phononkin
