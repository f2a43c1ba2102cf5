#pragma once

#include "phononkin/coupling.hpp"
#include "phononkin/fft.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace phononkin {

using Complex = std::complex<double>;

/// Displacements and momenta on a periodic chain of N sites.
struct ChainState {
  std::vector<double> q;
  std::vector<double> p;

  ChainState() = default;
  explicit ChainState(std::size_t n) : q(n, 0.0), p(n, 0.0) {}
  std::size_t size() const noexcept { return p.size(); }
};

/// A coupling model on the periodic lattice Z/NZ, with its tabulated
/// dispersion and DFT plans. Immutable after construction.
///
/// The complex field is psi(y) = ((omega~ * q)(y) + i p(y)) / sqrt 2, with the
/// convolution evaluated in Fourier space. For unpinned models omega(0) = 0,
/// so psi_hat(0) = i p_hat(0) / sqrt 2 and the mean displacement is not
/// encoded in psi; conversions back to (q, p) take it as an argument.
class Lattice {
public:
  Lattice(CouplingModel model, std::size_t n);

  std::size_t size() const noexcept { return n_; }
  const CouplingModel& model() const noexcept { return model_; }
  const DispersionTable& table() const noexcept { return table_; }
  const Dft& dft() const noexcept { return dft_; }
  const ExtendedDft& extended_dft() const noexcept { return xdft_; }

  std::vector<Complex> psi_hat(const ChainState& state) const;
  std::vector<Complex> psi(const ChainState& state) const;
  ChainState from_psi_hat(std::span<const Complex> psi_hat, double mean_q = 0.0) const;
  ChainState from_psi(std::span<const Complex> psi, double mean_q = 0.0) const;

  /// Fourier coefficients q_hat, p_hat (unnormalised forward DFT).
  void modes(const ChainState& state, std::vector<Complex>& q_hat, std::vector<Complex>& p_hat) const;
  ChainState from_modes(std::span<const Complex> q_hat, std::span<const Complex> p_hat) const;

  /// H = 1/2 sum p^2 + 1/2 sum_{y,y'} alpha(y - y') q_y q_y', evaluated in real space.
  double hamiltonian(const ChainState& state) const;
  double kinetic_energy(const ChainState& state) const;

private:
  CouplingModel model_;
  std::size_t n_;
  DispersionTable table_;
  Dft dft_;
  ExtendedDft xdft_;
};

/// e_y = |psi(y)|^2. Sums to the Hamiltonian.
std::vector<double> local_energy(const Lattice& lattice, const ChainState& state);

double total_momentum(const ChainState& state);

}  // namespace phononkin
