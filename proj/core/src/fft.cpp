#include "phononkin/fft.hpp"

#include "phononkin/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace phononkin {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

fftwl_complex* as_fftwl(std::complex<long double>* p) { return reinterpret_cast<fftwl_complex*>(p); }

fftw_complex* as_fftw(const std::complex<double>* p) {
  // FFTW never writes to the input of an out-of-place c2c transform planned
  // without FFTW_DESTROY_INPUT.
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

struct Dft::Plans {
  fftw_plan forward_out = nullptr;
  fftw_plan inverse_out = nullptr;
  fftw_plan forward_in = nullptr;
  fftw_plan inverse_in = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {forward_out, inverse_out, forward_in, inverse_in}) {
      if (p != nullptr) {
        fftw_destroy_plan(p);
      }
    }
  }
};

Dft::Dft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) {
    throw Error("DFT length must be positive");
  }
  std::vector<std::complex<double>> a(n), b(n);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
  std::lock_guard lock(planner_mutex());
  plans_->forward_out = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  plans_->inverse_out = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  plans_->forward_in =
      fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inverse_in =
      fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward_out || !plans_->inverse_out || !plans_->forward_in || !plans_->inverse_in) {
    throw Error("FFTW planning failed");
  }
}

Dft::~Dft() = default;
Dft::Dft(Dft&&) noexcept = default;
Dft& Dft::operator=(Dft&&) noexcept = default;

void Dft::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw Error("DFT size mismatch");
  }
  if (in.data() == out.data()) {
    fftw_execute_dft(plans_->forward_in, as_fftw(out.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans_->forward_out, as_fftw(in.data()), as_fftw(out.data()));
  }
}

void Dft::inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw Error("DFT size mismatch");
  }
  if (in.data() == out.data()) {
    fftw_execute_dft(plans_->inverse_in, as_fftw(out.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans_->inverse_out, as_fftw(in.data()), as_fftw(out.data()));
  }
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) {
    v *= scale;
  }
}

struct ExtendedDft::Plans {
  fftwl_plan forward = nullptr;
  fftwl_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftwl_plan p : {forward, inverse}) {
      if (p != nullptr) {
        fftwl_destroy_plan(p);
      }
    }
  }
};

ExtendedDft::ExtendedDft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n == 0) {
    throw Error("DFT length must be positive");
  }
  std::vector<std::complex<long double>> a(n);
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftwl_plan_dft_1d(len, as_fftwl(a.data()), as_fftwl(a.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inverse = fftwl_plan_dft_1d(len, as_fftwl(a.data()), as_fftwl(a.data()), FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->inverse) {
    throw Error("FFTW planning failed");
  }
}

ExtendedDft::~ExtendedDft() = default;
ExtendedDft::ExtendedDft(ExtendedDft&&) noexcept = default;
ExtendedDft& ExtendedDft::operator=(ExtendedDft&&) noexcept = default;

void ExtendedDft::forward(std::span<std::complex<long double>> z) const {
  if (z.size() != n_) {
    throw Error("DFT size mismatch");
  }
  fftwl_execute_dft(plans_->forward, as_fftwl(z.data()), as_fftwl(z.data()));
}

void ExtendedDft::inverse(std::span<std::complex<long double>> z) const {
  if (z.size() != n_) {
    throw Error("DFT size mismatch");
  }
  fftwl_execute_dft(plans_->inverse, as_fftwl(z.data()), as_fftwl(z.data()));
  const long double scale = 1.0L / static_cast<long double>(n_);
  for (auto& v : z) {
    v *= scale;
  }
}

}  // namespace phononkin
