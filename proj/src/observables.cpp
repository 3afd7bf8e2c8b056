#include "qent/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qent/errors.hpp"

namespace qent {

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::alpha: return "alpha";
    case Branch::beta: return "beta";
    case Branch::gamma_bar: return "gamma_bar";
    case Branch::delta_bar: return "delta_bar";
    case Branch::gamma_fluor: return "gamma";
    case Branch::delta_fluor: return "delta";
  }
  return "unknown";
}

double SpectrumCurve::integral() const {
  const auto w = axis.trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return s;
}

SpectrumCurve photoelectron_spectrum(const AmplitudeSet& amps, Branch branch) {
  SpectrumCurve c;
  c.axis = amps.electron_grid;
  c.branch = branch;
  c.eval_time = amps.eval_time;
  const auto ne = amps.electron_grid.size();
  c.values.assign(ne, 0.0);
  const auto wl = amps.photon_grid.trapezoid_weights();
  switch (branch) {
    case Branch::alpha:
      for (std::size_t i = 0; i < ne; ++i) c.values[i] = std::norm(amps.alpha[static_cast<Eigen::Index>(i)]);
      break;
    case Branch::beta:
      for (std::size_t i = 0; i < ne; ++i) c.values[i] = std::norm(amps.beta[static_cast<Eigen::Index>(i)]);
      break;
    case Branch::gamma_bar:
    case Branch::delta_bar: {
      const CMatrix& m = branch == Branch::gamma_bar ? amps.gamma : amps.delta;
      const double residual = branch == Branch::gamma_bar ? amps.residual_weight() : 0.0;
      for (std::size_t i = 0; i < ne; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        double s = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += wl[static_cast<std::size_t>(j)] * std::norm(m(ii, j));
        if (residual > 0.0) s += residual * std::norm(amps.beta_pulse_end[ii]);
        c.values[i] = s;
      }
      break;
    }
    default:
      throw DomainError("photoelectron spectra exist for alpha, beta, gamma_bar and delta_bar");
  }
  return c;
}

SpectrumCurve fluorescence_spectrum(const AmplitudeSet& amps, Branch branch) {
  if (branch != Branch::gamma_fluor && branch != Branch::delta_fluor)
    throw DomainError("fluorescence spectra exist for the gamma and delta branches");
  const bool is_gamma = branch == Branch::gamma_fluor;
  const CMatrix& m = is_gamma ? amps.gamma : amps.delta;
  const auto we = amps.electron_grid.trapezoid_weights();
  SpectrumCurve c;
  c.axis = amps.photon_grid;
  c.branch = branch;
  c.eval_time = amps.eval_time;
  c.values.assign(amps.photon_grid.size(), 0.0);
  double source = 0.0;
  if (is_gamma && !amps.line_residual.empty())
    for (Eigen::Index i = 0; i < amps.beta_pulse_end.size(); ++i)
      source += we[static_cast<std::size_t>(i)] * std::norm(amps.beta_pulse_end[i]);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += we[static_cast<std::size_t>(i)] * std::norm(m(i, j));
    if (is_gamma && !amps.line_residual.empty()) s += amps.line_residual[static_cast<std::size_t>(j)] * source;
    c.values[static_cast<std::size_t>(j)] = s;
  }
  return c;
}

double overlap_coefficient(const SpectrumCurve& a, const SpectrumCurve& b) {
  if (!(a.axis == b.axis) || a.values.size() != b.values.size())
    throw DomainError("overlap needs curves on the same axis");
  const double na = a.integral();
  const double nb = b.integral();
  if (!(na > 0.0) || !(nb > 0.0)) throw DomainError("overlap of a curve with zero area");
  const auto w = a.axis.trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::sqrt(std::max(0.0, a.values[i] * b.values[i]));
  return std::min(1.0, s / std::sqrt(na * nb));
}

std::vector<Peak> find_peaks(const SpectrumCurve& curve, double threshold) {
  const auto& v = curve.values;
  const std::size_t n = v.size();
  std::vector<double> sm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += v[k];
    sm[i] = s / static_cast<double>(hi - lo + 1);
  }
  std::vector<Peak> peaks;
  if (n < 3) return peaks;
  const double top = *std::max_element(sm.begin(), sm.end());
  if (!(top > 0.0)) return peaks;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (sm[i] > sm[i - 1] && sm[i] >= sm[i + 1] && sm[i] > threshold * top)
      peaks.push_back({i, curve.axis[i], sm[i], curve.axis.step()});
  return peaks;
}

}  // namespace qent
