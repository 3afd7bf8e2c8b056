#include "qent/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qent/errors.hpp"

namespace qent {

namespace {

constexpr double gaussian_cutoff = 2.5;  // support half-width in units of tau

double gaussian(double t, double tau) {
  return std::exp(-2.0 * std::numbers::ln2 * t * t / (tau * tau));
}

// Fraction of a sin^2 ramp, measured from its outer edge, at which the
// intensity Lambda^2 reaches one half.
double flattop_half_point() {
  return 2.0 / std::numbers::pi * std::asin(std::pow(0.5, 0.25));
}

}  // namespace

std::string_view to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::gaussian: return "gaussian";
    case PulseKind::flattop: return "flattop";
    case PulseKind::double_gaussian: return "double_gaussian";
    case PulseKind::custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Parity parity) { return parity == Parity::even ? "even" : "odd"; }

Pulse::Pulse(const PulseSpec& spec, std::size_t table_size) : spec_(spec) {
  if (!(std::isfinite(spec.tau) && spec.tau > 0.0))
    throw ConfigError("tau_fs", "pulse duration must be positive");
  const double tau = spec.tau;
  switch (spec.kind) {
    case PulseKind::gaussian:
      t1_ = gaussian_cutoff * tau;
      t0_ = -t1_;
      shape_ = [tau](double t) { return gaussian(t, tau); };
      break;
    case PulseKind::double_gaussian: {
      if (!(std::isfinite(spec.t_delta) && spec.t_delta >= 0.0))
        throw ConfigError("t_delta_fs", "pulse separation must be non-negative");
      const double td = spec.t_delta;
      const double sign = spec.parity == Parity::even ? 1.0 : -1.0;
      t1_ = td + gaussian_cutoff * tau;
      t0_ = -t1_;
      shape_ = [tau, td, sign](double t) { return gaussian(t + td, tau) + sign * gaussian(t - td, tau); };
      break;
    }
    case PulseKind::flattop: {
      if (!(std::isfinite(spec.ramp) && spec.ramp >= 0.0))
        throw ConfigError("ramp_fs", "ramp duration must be non-negative");
      const double ramp = spec.ramp;
      const double plateau = 0.5 * tau - (1.0 - flattop_half_point()) * ramp;
      if (plateau < 0.0) throw ConfigError("ramp_fs", "ramp too long for the requested FWHM");
      t1_ = plateau + ramp;
      t0_ = -t1_;
      const double edge = t1_;
      shape_ = [plateau, ramp, edge](double t) {
        const double a = std::abs(t);
        if (a <= plateau) return 1.0;
        const double s = std::sin(0.5 * std::numbers::pi * (edge - a) / ramp);
        return s * s;
      };
      break;
    }
    case PulseKind::custom:
      throw ConfigError("pulse_shape", "custom pulses are built with Pulse::custom");
  }
  build_tables(table_size);
}

Pulse Pulse::custom(std::function<double(double)> envelope, double t0, double t1,
                    std::size_t table_size) {
  if (!(t0 < t1)) throw DomainError("custom pulse needs t0 < t1");
  Pulse p;
  p.spec_.kind = PulseKind::custom;
  p.spec_.tau = t1 - t0;
  p.shape_ = std::move(envelope);
  p.t0_ = t0;
  p.t1_ = t1;
  p.build_tables(table_size);
  return p;
}

void Pulse::build_tables(std::size_t table_size) {
  const std::size_t m = std::max<std::size_t>(table_size, 3);
  table_step_ = (t1_ - t0_) / static_cast<double>(m - 1);
  prefix_lambda_.assign(m, 0.0);
  prefix_lambda2_.assign(m, 0.0);
  double left = envelope(t0_);
  for (std::size_t i = 1; i < m; ++i) {
    const double a = t0_ + static_cast<double>(i - 1) * table_step_;
    const double b = i + 1 == m ? t1_ : t0_ + static_cast<double>(i) * table_step_;
    const double mid = envelope(0.5 * (a + b));
    const double right = envelope(b);
    // Simpson's rule per table cell.
    const double h6 = (b - a) / 6.0;
    prefix_lambda_[i] = prefix_lambda_[i - 1] + h6 * (left + 4.0 * mid + right);
    prefix_lambda2_[i] = prefix_lambda2_[i - 1] + h6 * (left * left + 4.0 * mid * mid + right * right);
    left = right;
  }
}

double Pulse::envelope(double t) const {
  if (t < t0_ || t > t1_) return 0.0;
  return shape_(t);
}

double Pulse::prefix(const std::vector<double>& table, double t) const {
  if (t <= t0_) return 0.0;
  if (t >= t1_) return table.back();
  const double u = (t - t0_) / table_step_;
  const auto i = std::min(static_cast<std::size_t>(u), table.size() - 2);
  const double f = u - static_cast<double>(i);
  return table[i] + f * (table[i + 1] - table[i]);
}

double Pulse::envelope_integral(double from, double to) const {
  return prefix(prefix_lambda_, to) - prefix(prefix_lambda_, from);
}

double Pulse::envelope_squared_integral(double from, double to) const {
  return prefix(prefix_lambda2_, to) - prefix(prefix_lambda2_, from);
}

double Pulse::carrier_phase_difference(double omega0) const {
  return 2.0 * omega0 * spec_.t_delta;
}

double cumulative_area(const Pulse& pulse, const PhysicalConfig& config, double t_prime,
                       double t) {
  return config.rabi_frequency() * pulse.envelope_integral(t_prime, t);
}

RabiPair rabi_pair(double theta) {
  return {std::complex<double>(std::cos(0.5 * theta), 0.0),
          std::complex<double>(0.0, -std::sin(0.5 * theta)), theta};
}

double parity_locked_delay(double t_delta, Parity parity, double omega0) {
  const double n = std::round(2.0 * omega0 * t_delta / std::numbers::pi);
  const bool want_odd = parity == Parity::odd;
  double m = n;
  if ((std::fmod(std::abs(n), 2.0) == 1.0) != want_odd) {
    const double exact = 2.0 * omega0 * t_delta / std::numbers::pi;
    m = exact >= n ? n + 1.0 : n - 1.0;
    if (m < 0.0) m = n + 1.0;
  }
  return m * std::numbers::pi / (2.0 * omega0);
}

}  // namespace qent
