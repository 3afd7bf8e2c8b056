#include "qent/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qent/errors.hpp"

namespace qent {

double units::intensity_to_field(double intensity_wcm2) {
  if (!std::isfinite(intensity_wcm2) || intensity_wcm2 < 0.0)
    throw ConfigError("intensity_wcm2", "intensity must be finite and non-negative");
  return std::sqrt(intensity_wcm2 / au_intensity_wcm2);
}

PhysicalConfig PhysicalConfig::from_dipoles(double omega0, double intensity_wcm2, double z_ag,
                                            double z_ba) {
  constexpr double c3 =
      units::speed_of_light * units::speed_of_light * units::speed_of_light;
  PhysicalConfig p;
  p.omega0 = omega0;
  p.intensity = intensity_wcm2;
  p.field_amplitude = units::intensity_to_field(intensity_wcm2);
  p.z_ag = z_ag;
  p.z_ba = z_ba;
  p.kappa = 4.0 * z_ba * z_ba * omega0 * omega0 * omega0 / c3;
  p.v_sp = std::abs(z_ba) * std::sqrt(2.0 * omega0 * omega0 * omega0 / (std::numbers::pi * c3));
  p.eps_a = -2.0;
  p.eps_b = p.eps_a + omega0;
  return p;
}

double PhysicalConfig::rabi_period() const {
  return 2.0 * std::numbers::pi / rabi_frequency();
}

void PhysicalConfig::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(omega0)) throw ConfigError("omega0_ev", "photon energy must be positive");
  if (!positive(field_amplitude)) throw ConfigError("intensity_wcm2", "field amplitude must be positive");
  if (!std::isfinite(z_ag) || z_ag < 0.0) throw ConfigError("z_ag", "dipole must be non-negative");
  if (!positive(z_ba)) throw ConfigError("z_ba", "dipole must be positive");
  if (!positive(kappa)) throw ConfigError("z_ba", "fluorescence rate must be positive");
  if (!std::isfinite(v_sp) || v_sp < 0.0) throw ConfigError("z_ba", "v_sp must be real and >= 0");
  const double two_pi_v2 = 2.0 * std::numbers::pi * v_sp * v_sp;
  if (std::abs(two_pi_v2 - kappa) > 1e-12 * kappa)
    throw ConfigError("z_ba", "kappa != 2 pi v_sp^2");
  if (std::abs((eps_b - eps_a) - omega0) > 1e-12 * omega0)
    throw ConfigError("omega0_ev", "photon energy must be resonant with eps_b - eps_a");
}

EnergyGrid::EnergyGrid(double min, double max, std::size_t n) : min_(min), max_(max), n_(n) {
  if (n < 2) throw ConfigError("", "energy grid needs at least two points");
  if (!(std::isfinite(min) && std::isfinite(max) && max > min))
    throw ConfigError("", "energy grid needs finite min < max");
}

double EnergyGrid::operator[](std::size_t i) const {
  if (i + 1 == n_) return max_;
  return min_ + static_cast<double>(i) * step();
}

double EnergyGrid::max_abs() const { return std::max(std::abs(min_), std::abs(max_)); }

std::vector<double> EnergyGrid::points() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = (*this)[i];
  return x;
}

std::vector<double> EnergyGrid::trapezoid_weights() const {
  std::vector<double> w(n_, step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::size_t EnergyGrid::nearest_index(double x) const {
  const double r = std::round((x - min_) / step());
  return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n_ - 1)));
}

double max_pulse_step(double rabi_period, double max_abs_energy) {
  double h = rabi_period / 200.0;
  if (max_abs_energy > 0.0) h = std::min(h, 2.0 * std::numbers::pi / (40.0 * max_abs_energy));
  return h;
}

TimeGrid TimeGrid::make(double t0, double t1, double tf, double max_step,
                        std::size_t n_checkpoints) {
  if (!(max_step > 0.0)) throw DomainError("time step must be positive");
  TimeGrid g;
  g.t0 = t0;
  g.t1 = t1;
  g.tf = tf;
  g.n_pulse = static_cast<std::size_t>(std::ceil((t1 - t0) / max_step)) + 1;
  g.n_pulse = std::max<std::size_t>(g.n_pulse, 2);
  if (tf > t1 && n_checkpoints > 0) {
    // Geometric from t1 (exclusive) to tf (inclusive).
    if (!(t1 > 0.0)) throw DomainError("log-spaced checkpoints need t1 > 0");
    const double ratio = tf / t1;
    for (std::size_t j = 1; j <= n_checkpoints; ++j) {
      const double t = j == n_checkpoints
                           ? tf
                           : t1 * std::pow(ratio, static_cast<double>(j) /
                                                      static_cast<double>(n_checkpoints));
      g.checkpoints.push_back(t);
    }
  }
  g.validate();
  return g;
}

double TimeGrid::node(std::size_t i) const {
  if (i + 1 == n_pulse) return t1;
  return t0 + static_cast<double>(i) * step();
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(n_pulse);
  for (std::size_t i = 0; i < n_pulse; ++i) t[i] = node(i);
  return t;
}

void TimeGrid::validate() const {
  if (!(t0 < t1 && t1 <= tf)) throw DomainError("time grid requires t0 < t1 <= tf");
  if (n_pulse < 2) throw DomainError("time grid requires at least two pulse nodes");
  double prev = t1;
  for (double t : checkpoints) {
    if (!(t > prev) || t > tf) throw DomainError("checkpoints must increase within (t1, tf]");
    prev = t;
  }
}

}  // namespace qent
