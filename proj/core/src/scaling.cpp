#include "phononkin/scaling.hpp"

#include "phononkin/errors.hpp"
#include "phononkin/rng.hpp"

#include <algorithm>
#include <cmath>

namespace phononkin {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

ScalingFit decay_exponent(std::span<const double> x, std::span<const double> y, double lo, double hi,
                          double residual_threshold, std::size_t resamples, std::uint64_t seed) {
  if (x.size() != y.size()) {
    throw Error("abscissae and ordinates differ in length");
  }
  ScalingFit out;
  out.window_low = lo;
  out.window_high = hi;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= lo && x[i] <= hi) {
      if (!(y[i] > 0.0) || !(x[i] > 0.0)) {
        throw Error("power-law fit needs positive data in the window");
      }
      out.abscissae.push_back(x[i]);
      out.ordinates.push_back(y[i]);
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) {
    throw EmptyWindow("fewer than three points in the fit window");
  }
  const LineFit fit = fit_line(lx, ly);
  out.exponent = fit.slope;
  out.prefactor = std::exp(fit.intercept);
  out.residual = fit.rms;
  out.power_law = fit.rms < residual_threshold;

  Rng rng = make_stream(seed, 0);
  std::uniform_int_distribution<std::size_t> pick(0, lx.size() - 1);
  std::vector<double> slopes;
  std::vector<double> bx(lx.size()), by(lx.size());
  for (std::size_t b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const std::size_t j = pick(rng);
      bx[i] = lx[j];
      by[i] = ly[j];
    }
    slopes.push_back(fit_line(bx, by).slope);
  }
  if (slopes.empty()) {
    out.ci_low = out.ci_high = out.exponent;
  } else {
    std::sort(slopes.begin(), slopes.end());
    const auto at = [&](double q) {
      return slopes[std::min(slopes.size() - 1, static_cast<std::size_t>(q * static_cast<double>(slopes.size())))];
    };
    out.ci_low = at(0.025);
    out.ci_high = at(0.975);
  }
  return out;
}

ScalingFit decay_exponent(const std::function<double(double)>& f, double lo, double hi, std::size_t points,
                          double residual_threshold) {
  if (!(lo > 0.0) || !(hi > lo) || points < 3) {
    throw EmptyWindow("need 0 < lo < hi and at least three points");
  }
  std::vector<double> x(points), y(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    x[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  x.front() = lo;
  x.back() = hi;
  for (std::size_t i = 0; i < points; ++i) {
    y[i] = f(x[i]);
  }
  return decay_exponent(x, y, lo, hi, residual_threshold);
}

}  // namespace phononkin
