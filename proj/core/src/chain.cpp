#include "phononkin/chain.hpp"

#include "phononkin/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace phononkin {

namespace {

constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
constexpr Complex imag_unit{0.0, 1.0};

}  // namespace

Lattice::Lattice(CouplingModel model, std::size_t n)
    : model_(std::move(model)), n_(n), table_(dispersion(model_, n)), dft_(n), xdft_(n) {}

void Lattice::modes(const ChainState& state, std::vector<Complex>& q_hat, std::vector<Complex>& p_hat) const {
  if (state.q.size() != n_ || state.p.size() != n_) {
    throw Error("chain state size does not match lattice");
  }
  std::vector<Complex> z(n_);
  for (std::size_t y = 0; y < n_; ++y) {
    z[y] = Complex(state.q[y], state.p[y]);
  }
  dft_.forward(z, z);
  q_hat.resize(n_);
  p_hat.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const Complex a = z[j];
    const Complex b = std::conj(z[(n_ - j) % n_]);
    q_hat[j] = 0.5 * (a + b);
    p_hat[j] = (a - b) / (2.0 * imag_unit);
  }
}

ChainState Lattice::from_modes(std::span<const Complex> q_hat, std::span<const Complex> p_hat) const {
  std::vector<Complex> z(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    z[j] = q_hat[j] + imag_unit * p_hat[j];
  }
  dft_.inverse(z, z);
  ChainState state(n_);
  for (std::size_t y = 0; y < n_; ++y) {
    state.q[y] = z[y].real();
    state.p[y] = z[y].imag();
  }
  return state;
}

std::vector<Complex> Lattice::psi_hat(const ChainState& state) const {
  std::vector<Complex> q_hat, p_hat;
  modes(state, q_hat, p_hat);
  std::vector<Complex> out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    out[j] = inv_sqrt2 * (table_.omega[j] * q_hat[j] + imag_unit * p_hat[j]);
  }
  return out;
}

std::vector<Complex> Lattice::psi(const ChainState& state) const {
  auto out = psi_hat(state);
  dft_.inverse(out, out);
  return out;
}

ChainState Lattice::from_psi_hat(std::span<const Complex> psi_hat, double mean_q) const {
  if (psi_hat.size() != n_) {
    throw Error("psi_hat size does not match lattice");
  }
  std::vector<Complex> q_hat(n_), p_hat(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const Complex a = psi_hat[j];
    const Complex b = std::conj(psi_hat[(n_ - j) % n_]);
    const Complex wq = inv_sqrt2 * (a + b);
    p_hat[j] = inv_sqrt2 * (a - b) / imag_unit;
    const double w = table_.omega[j];
    q_hat[j] = w > 0.0 ? wq / w : Complex(mean_q * static_cast<double>(n_), 0.0);
  }
  return from_modes(q_hat, p_hat);
}

ChainState Lattice::from_psi(std::span<const Complex> psi, double mean_q) const {
  std::vector<Complex> hat(psi.begin(), psi.end());
  if (hat.size() != n_) {
    throw Error("psi size does not match lattice");
  }
  dft_.forward(hat, hat);
  return from_psi_hat(hat, mean_q);
}

double Lattice::kinetic_energy(const ChainState& state) const {
  double s = 0.0;
  for (double v : state.p) {
    s += v * v;
  }
  return 0.5 * s;
}

double Lattice::hamiltonian(const ChainState& state) const {
  if (state.q.size() != n_ || state.p.size() != n_) {
    throw Error("chain state size does not match lattice");
  }
  const int range = model_.range();
  const auto n = static_cast<long>(n_);
  double potential = 0.0;
  for (long y = 0; y < n; ++y) {
    double conv = 0.0;
    for (int z = -range; z <= range; ++z) {
      const long idx = ((y + z) % n + n) % n;
      conv += model_.alpha(z) * state.q[static_cast<std::size_t>(idx)];
    }
    potential += state.q[static_cast<std::size_t>(y)] * conv;
  }
  return kinetic_energy(state) + 0.5 * potential;
}

std::vector<double> local_energy(const Lattice& lattice, const ChainState& state) {
  const auto field = lattice.psi(state);
  std::vector<double> e(field.size());
  for (std::size_t y = 0; y < field.size(); ++y) {
    e[y] = std::norm(field[y]);
  }
  return e;
}

double total_momentum(const ChainState& state) {
  return std::accumulate(state.p.begin(), state.p.end(), 0.0);
}

}  // namespace phononkin
