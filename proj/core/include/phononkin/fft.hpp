#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace phononkin {

/// Complex DFT of fixed length backed by FFTW.
///
/// forward:  out(k) = sum_y exp(-2 pi i k y / N) in(y)
/// inverse:  out(y) = (1/N) sum_k exp(+2 pi i k y / N) in(k)
///
/// Plans use FFTW_ESTIMATE so results are bitwise reproducible across runs.
/// Executing a plan is thread-safe; in-place and out-of-place calls are both
/// accepted.
class Dft {
public:
  explicit Dft(std::size_t n);
  ~Dft();
  Dft(Dft&&) noexcept;
  Dft& operator=(Dft&&) noexcept;
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
  struct Plans;
  std::size_t n_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// In-place transform pair in long double with the same conventions as Dft.
/// A double round trip through FFTW biases |z|^2 by about 1e-16 per call;
/// this one is used where the transform is repeated millions of times.
class ExtendedDft {
public:
  explicit ExtendedDft(std::size_t n);
  ~ExtendedDft();
  ExtendedDft(ExtendedDft&&) noexcept;
  ExtendedDft& operator=(ExtendedDft&&) noexcept;
  ExtendedDft(const ExtendedDft&) = delete;
  ExtendedDft& operator=(const ExtendedDft&) = delete;

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<std::complex<long double>> z) const;
  void inverse(std::span<std::complex<long double>> z) const;

private:
  struct Plans;
  std::size_t n_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace phononkin
