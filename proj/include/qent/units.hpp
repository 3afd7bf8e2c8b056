#pragma once

// Atomic units (hbar = e = m_e = 4 pi eps0 = 1) throughout. Conversions to
// eV, fs, s and W/cm^2 happen only at the I/O boundary.

#include <cstddef>
#include <span>
#include <vector>

namespace qent {

namespace units {

inline constexpr double hartree_ev = 27.211386;
inline constexpr double au_time_fs = 0.024188843265857;
inline constexpr double au_intensity_wcm2 = 3.50945e16;
inline constexpr double speed_of_light = 137.035999084;

constexpr double ev_to_au(double ev) { return ev / hartree_ev; }
constexpr double au_to_ev(double au) { return au * hartree_ev; }
constexpr double fs_to_au(double fs) { return fs / au_time_fs; }
constexpr double au_to_fs(double au) { return au * au_time_fs; }
constexpr double s_to_au(double s) { return fs_to_au(s * 1e15); }
constexpr double au_to_s(double au) { return au_to_fs(au) * 1e-15; }

/// Peak field amplitude (a.u.) for a peak intensity in W/cm^2.
/// Throws ConfigError("intensity_wcm2") for negative or non-finite input.
double intensity_to_field(double intensity_wcm2);

}  // namespace units

/// Atomic and field constants of the driven ion. Derived members are filled
/// by `from_dipoles`; tests may edit them directly (e.g. v_sp = 0) to switch
/// individual couplings off, in which case `validate` is not called.
struct PhysicalConfig {
  double omega0 = 0.0;           // photon energy, resonant with eps_b - eps_a
  double intensity = 0.0;        // W/cm^2
  double field_amplitude = 0.0;  // E0
  double z_ag = 0.0;             // ionization dipole
  double z_ba = 0.0;             // ionic 1s-2p dipole
  double kappa = 0.0;            // fluorescence rate 4 z_ba^2 omega0^3 / c^3
  double v_sp = 0.0;             // spontaneous-emission coupling, kappa = 2 pi v_sp^2
  double eps_a = 0.0;            // ionic ground level
  double eps_b = 0.0;            // ionic excited level

  /// Builds a helium-like configuration (eps_a = -2, the He+ 1s energy).
  static PhysicalConfig from_dipoles(double omega0, double intensity_wcm2, double z_ag,
                                     double z_ba);

  double ionization_coupling() const { return z_ag * field_amplitude; }  // Omega_ag
  double rabi_frequency() const { return z_ba * field_amplitude; }       // Omega_0
  double rabi_period() const;
  double spontaneous_lifetime() const { return 1.0 / kappa; }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Uniform grid of relative energies, used for both the photoelectron
/// energy and the fluorescence-photon energy.
class EnergyGrid {
 public:
  EnergyGrid() = default;
  EnergyGrid(double min, double max, std::size_t n);

  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t size() const { return n_; }
  double step() const { return (max_ - min_) / static_cast<double>(n_ - 1); }
  double operator[](std::size_t i) const;
  double max_abs() const;
  std::vector<double> points() const;
  std::vector<double> trapezoid_weights() const;
  std::size_t nearest_index(double x) const;

  bool operator==(const EnergyGrid&) const = default;

 private:
  double min_ = -1.0;
  double max_ = 1.0;
  std::size_t n_ = 2;
};

/// Largest admissible quadrature step inside the pulse: at most T_R/200 and
/// at most 1/40 of the fastest oscillation period of exp(i eps t).
double max_pulse_step(double rabi_period, double max_abs_energy);

/// Time discretization: uniform nodes on [t0, t1] plus post-pulse checkpoints.
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double tf = 0.0;
  std::size_t n_pulse = 2;
  std::vector<double> checkpoints;  // strictly increasing, in (t1, tf]

  /// Uniform nodes on [t0, t1] with step <= max_step and `n_checkpoints`
  /// geometrically spaced post-pulse times ending at tf.
  static TimeGrid make(double t0, double t1, double tf, double max_step,
                       std::size_t n_checkpoints);

  double step() const { return (t1 - t0) / static_cast<double>(n_pulse - 1); }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;
  void validate() const;
};

}  // namespace qent
