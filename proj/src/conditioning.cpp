#include "qent/conditioning.hpp"

#include <cmath>
#include <string>

#include "qent/errors.hpp"

namespace qent {

namespace {

struct Sectors {
  double aa = 0.0, bb = 0.0, gg = 0.0, dd = 0.0;
  cplx ab, gd;
  cplx ag, ad, bg, bd;  // no-photon / one-photon cross terms
};

cplx weighted_inner(const std::vector<double>& w, const CVector& x, const CVector& y) {
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += w[static_cast<std::size_t>(i)] * std::conj(x[i]) * y[i];
  return s;
}

Sectors sectors(const AmplitudeSet& amps, const ConditioningOptions& opts, bool need_photon) {
  const auto we = amps.electron_grid.trapezoid_weights();
  Sectors s;
  s.aa = weighted_inner(we, amps.alpha, amps.alpha).real();
  s.bb = weighted_inner(we, amps.beta, amps.beta).real();
  s.ab = weighted_inner(we, amps.alpha, amps.beta);
  if (!need_photon) return s;

  const Populations p = populations(amps);
  s.gg = p.gamma;
  s.dd = p.delta;
  const auto wl = amps.photon_grid.trapezoid_weights();
  for (Eigen::Index j = 0; j < amps.gamma.cols(); ++j) {
    cplx col = 0.0;
    for (Eigen::Index i = 0; i < amps.gamma.rows(); ++i)
      col += we[static_cast<std::size_t>(i)] * std::conj(amps.gamma(i, j)) * amps.delta(i, j);
    s.gd += wl[static_cast<std::size_t>(j)] * col;
  }

  if (opts.cross_terms == CrossTerms::single_bin) {
    // Overlap with a unit-norm photon state filling the single bin at 0.
    const std::size_t j0 = amps.photon_grid.nearest_index(0.0);
    const double amp = std::sqrt(wl[j0]);
    const CVector fg = amp * amps.gamma.col(static_cast<Eigen::Index>(j0));
    const CVector fd = amp * amps.delta.col(static_cast<Eigen::Index>(j0));
    s.ag = weighted_inner(we, amps.alpha, fg);
    s.ad = weighted_inner(we, amps.alpha, fd);
    s.bg = weighted_inner(we, amps.beta, fg);
    s.bd = weighted_inner(we, amps.beta, fd);
  }
  return s;
}

ReducedDensity finish(Partition label, CMatrix m, double floor) {
  const double norm = m.trace().real();
  if (!(norm > floor))
    throw UndefinedConditionError("conditioning on partition " + std::string(to_string(label)) +
                                  " with vanishing probability");
  m /= norm;
  ReducedDensity rho;
  rho.label = label;
  rho.matrix = 0.5 * (m + m.adjoint());
  rho.norm = norm;
  return rho;
}

void fill_symmetric(CMatrix& m, Eigen::Index i, Eigen::Index j, cplx v) {
  m(i, j) = v;
  m(j, i) = std::conj(v);
}

}  // namespace

std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::electron_ion: return "AB";
    case Partition::electron_photon_number: return "AC";
    case Partition::qutrit: return "qutrit";
    case Partition::ququart: return "ququart";
    case Partition::modes: return "modes";
  }
  return "unknown";
}

ReducedDensity rho_electron_ion(const AmplitudeSet& amps, const ConditioningOptions& opts) {
  const Sectors s = sectors(amps, opts, false);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = s.aa;
  m(1, 1) = s.bb;
  fill_symmetric(m, 0, 1, s.ab);
  return finish(Partition::electron_ion, std::move(m), opts.norm_floor);
}

ReducedDensity rho_electron_photon_number(const AmplitudeSet& amps, const ConditioningOptions& opts) {
  const Sectors s = sectors(amps, opts, true);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = s.aa;
  m(1, 1) = s.gg;
  fill_symmetric(m, 0, 1, s.ag);
  return finish(Partition::electron_photon_number, std::move(m), opts.norm_floor);
}

ReducedDensity rho_qutrit(const AmplitudeSet& amps, const ConditioningOptions& opts) {
  const Sectors s = sectors(amps, opts, true);
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = s.aa;
  m(1, 1) = s.bb;
  m(2, 2) = s.gg;
  fill_symmetric(m, 0, 1, s.ab);
  fill_symmetric(m, 0, 2, s.ag);
  fill_symmetric(m, 1, 2, s.bg);
  return finish(Partition::qutrit, std::move(m), opts.norm_floor);
}

ReducedDensity rho_ququart(const AmplitudeSet& amps, const ConditioningOptions& opts) {
  const Sectors s = sectors(amps, opts, true);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = s.aa;
  m(1, 1) = s.bb;
  m(2, 2) = s.gg;
  m(3, 3) = s.dd;
  fill_symmetric(m, 0, 1, s.ab);
  fill_symmetric(m, 0, 2, s.ag);
  fill_symmetric(m, 0, 3, s.ad);
  fill_symmetric(m, 1, 2, s.bg);
  fill_symmetric(m, 1, 3, s.bd);
  fill_symmetric(m, 2, 3, s.gd);
  return finish(Partition::ququart, std::move(m), opts.norm_floor);
}

ReducedDensity rho_modes(const AmplitudeSet& amps, const ConditioningOptions& opts) {
  const auto we = amps.electron_grid.trapezoid_weights();
  const auto wl = amps.photon_grid.trapezoid_weights();
  const Eigen::Index ne = amps.gamma.rows();
  const Eigen::Index nl = amps.gamma.cols();
  const double residual = amps.residual_weight();
  const Eigen::Index modes = nl + (residual > 0.0 ? 1 : 0);

  // Rows: sqrt-weighted gamma then delta amplitudes; columns: photon modes.
  CMatrix x = CMatrix::Zero(2 * ne, modes);
  for (Eigen::Index j = 0; j < nl; ++j) {
    for (Eigen::Index i = 0; i < ne; ++i) {
      const double w = std::sqrt(we[static_cast<std::size_t>(i)] * wl[static_cast<std::size_t>(j)]);
      x(i, j) = w * amps.gamma(i, j);
      x(ne + i, j) = w * amps.delta(i, j);
    }
  }
  if (modes > nl) {
    const double r = std::sqrt(residual);
    for (Eigen::Index i = 0; i < ne; ++i)
      x(i, nl) = r * std::sqrt(we[static_cast<std::size_t>(i)]) * amps.beta_pulse_end[i];
  }
  CMatrix m = x.adjoint() * x;
  return finish(Partition::modes, std::move(m), opts.norm_floor);
}

ReducedDensity reduced_density(const AmplitudeSet& amps, Partition p, const ConditioningOptions& opts) {
  switch (p) {
    case Partition::electron_ion: return rho_electron_ion(amps, opts);
    case Partition::electron_photon_number: return rho_electron_photon_number(amps, opts);
    case Partition::qutrit: return rho_qutrit(amps, opts);
    case Partition::ququart: return rho_ququart(amps, opts);
    case Partition::modes: return rho_modes(amps, opts);
  }
  throw DomainError("unknown partition");
}

}  // namespace qent
