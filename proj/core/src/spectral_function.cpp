#include "phononkin/spectral_function.hpp"

#include "phononkin/csv.hpp"
#include "phononkin/errors.hpp"

#include <cmath>

namespace phononkin {

SpectralFunction SpectralFunction::from_real(const std::vector<double>& v) {
  SpectralFunction f(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    f.values[j] = v[j];
  }
  return f;
}

SpectralFunction SpectralFunction::tabulate(std::size_t n, const std::function<double(double)>& fn) {
  SpectralFunction f(n);
  for (std::size_t j = 0; j < n; ++j) {
    f.values[j] = fn(f.k(j));
  }
  return f;
}

std::vector<double> SpectralFunction::real() const {
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    out[j] = values[j].real();
  }
  return out;
}

double SpectralFunction::integral() const {
  double s = 0.0;
  for (const auto& v : values) {
    s += v.real();
  }
  return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double l1_distance(const SpectralFunction& a, const SpectralFunction& b) {
  if (a.size() != b.size()) {
    throw Error("spectral functions live on different grids");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    s += std::abs(a.values[j].real() - b.values[j].real());
  }
  return s / static_cast<double>(a.size());
}

void write_csv(std::ostream& out, const SpectralFunction& f) {
  CsvWriter csv(out, {"k", "value_re", "value_im", "stderr"});
  for (std::size_t j = 0; j < f.size(); ++j) {
    csv.row({f.k(j), f.values[j].real(), f.values[j].imag(), f.stderr_.empty() ? 0.0 : f.stderr_[j]});
  }
}

void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<SpectralFunction>& fs) {
  if (times.size() != fs.size()) {
    throw Error("one spectral function per time required");
  }
  CsvWriter csv(out, {"t", "k", "value_re", "value_im", "stderr"});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    for (std::size_t j = 0; j < f.size(); ++j) {
      csv.row({times[i], f.k(j), f.values[j].real(), f.values[j].imag(), f.stderr_.empty() ? 0.0 : f.stderr_[j]});
    }
  }
}

}  // namespace phononkin
