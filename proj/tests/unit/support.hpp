#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qent/amplitudes.hpp"
#include "qent/config.hpp"

namespace qent::test {

/// Default helium physics with a short Gaussian and coarse grids, cheap
/// enough for unit tests while keeping every spectral feature resolved.
inline RunConfig small_config(double tau_fs = 10.0, std::size_t n = 81, double half_width_ev = 1.0) {
  RunConfig cfg = default_config();
  cfg.pulse.tau = units::fs_to_au(tau_fs);
  cfg.electron_grid = EnergyGrid(units::ev_to_au(-half_width_ev), units::ev_to_au(half_width_ev), n);
  cfg.photon_grid = cfg.electron_grid;
  cfg.n_checkpoints = 12;
  return cfg;
}

/// Closed forms for the Gaussian envelope exp(-2 ln2 t^2 / tau^2), used as
/// oracles independent of the pulse tables.
struct GaussianForms {
  double tau;
  double c() const { return 2.0 * std::numbers::ln2 / (tau * tau); }
  double envelope(double t) const { return std::exp(-c() * t * t); }
  // int_{-inf}^{t} Lambda, int_{-inf}^{t} Lambda^2
  double integral(double t) const {
    return 0.5 * std::sqrt(std::numbers::pi / c()) * (1.0 + std::erf(std::sqrt(c()) * t));
  }
  double squared_integral(double t) const {
    return 0.5 * std::sqrt(std::numbers::pi / (2.0 * c())) * (1.0 + std::erf(std::sqrt(2.0 * c()) * t));
  }
};

inline CMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix z(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) z(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  return qr.householderQ() * CMatrix::Identity(d, d);
}

/// Random density matrix of rank `rank` (full rank when 0).
inline CMatrix random_density(std::size_t d, std::mt19937_64& rng, std::size_t rank = 0) {
  std::normal_distribution<double> n(0.0, 1.0);
  const std::size_t r = rank == 0 ? d : rank;
  CMatrix x(d, r);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < r; ++j) x(i, j) = cplx(n(rng), n(rng));
  CMatrix rho = x * x.adjoint();
  return rho / rho.trace().real();
}

}  // namespace qent::test
