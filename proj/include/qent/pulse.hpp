#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "qent/units.hpp"

namespace qent {

enum class PulseKind { gaussian, flattop, double_gaussian, custom };
enum class Parity { even, odd };

std::string_view to_string(PulseKind kind);
std::string_view to_string(Parity parity);

struct PulseSpec {
  PulseKind kind = PulseKind::gaussian;
  double tau = 0.0;      // FWHM of intensity; per sub-pulse for double_gaussian
  double ramp = 0.0;     // flattop edge duration
  double t_delta = 0.0;  // half separation of the double-Gaussian sub-pulses
  Parity parity = Parity::even;
};

/// Real (signed) field envelope Lambda(t) with support [t0, t1] and
/// prefix-integral tables for Lambda and Lambda^2.
///
/// Gaussian: exp(-2 ln2 t^2 / tau^2), t1 = -t0 = 2.5 tau.
/// Flattop: unit plateau with sin^2 ramps, tau = plateau-inclusive FWHM of
///   intensity.
/// Double Gaussian: G(t + t_delta) +/- G(t - t_delta) on
///   [-t_delta - 2.5 tau, t_delta + 2.5 tau]; '+' even, '-' odd.
///
/// Immutable after construction.
class Pulse {
 public:
  static constexpr std::size_t default_table_size = std::size_t{1} << 16;

  explicit Pulse(const PulseSpec& spec, std::size_t table_size = default_table_size);

  /// Arbitrary envelope on [t0, t1]; used for tests and what-if studies.
  static Pulse custom(std::function<double(double)> envelope, double t0, double t1,
                      std::size_t table_size = default_table_size);

  const PulseSpec& spec() const { return spec_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double duration() const { return t1_ - t0_; }

  /// Lambda(t); exactly zero outside [t0, t1].
  double envelope(double t) const;

  /// Signed integral of Lambda from `from` to `to` (reversed limits negate).
  double envelope_integral(double from, double to) const;
  double envelope_squared_integral(double from, double to) const;

  /// Carrier-envelope phase difference 2 omega0 t_delta of a pulse pair.
  double carrier_phase_difference(double omega0) const;

 private:
  Pulse() = default;
  void build_tables(std::size_t table_size);
  double prefix(const std::vector<double>& table, double t) const;

  PulseSpec spec_;
  std::function<double(double)> shape_;
  double t0_ = 0.0;
  double t1_ = 0.0;
  double table_step_ = 0.0;
  std::vector<double> prefix_lambda_;
  std::vector<double> prefix_lambda2_;
};

/// Pulse area theta(t, t_prime) = Omega_0 * int_{t_prime}^{t} Lambda.
double cumulative_area(const Pulse& pulse, const PhysicalConfig& config, double t_prime,
                       double t);

/// Area-theorem amplitudes of the resonantly driven ionic two-level system.
struct RabiPair {
  std::complex<double> a;  // cos(theta/2)
  std::complex<double> b;  // -i sin(theta/2)
  double theta = 0.0;
};

RabiPair rabi_pair(double theta);

/// Nearest half separation whose carrier phase difference 2 omega0 t_delta is
/// an even (or odd) multiple of pi.
double parity_locked_delay(double t_delta, Parity parity, double omega0);

}  // namespace qent
