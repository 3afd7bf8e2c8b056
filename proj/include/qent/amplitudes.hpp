#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "qent/pulse.hpp"
#include "qent/units.hpp"

namespace qent {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Decay constant K(t) of the excited-ion sectors: kappa/4 up to and
/// including t1 (dressed-ion value), kappa/2 afterwards.
double decay_constant(const PhysicalConfig& config, double t, double t1);

/// Interaction-picture amplitudes at one evaluation time.
///
/// alpha, beta are sampled on the electron grid; gamma, delta on
/// electron x photon (rows = electron energy, columns = photon energy).
///
/// After the pulse, gamma = gamma_pulse + beta(t1) (x) L, where the emission
/// factor L is a Lorentzian line of width kappa, far narrower than a photon
/// bin on ordinary grids. `gamma` therefore holds the bin-averaged line
/// (`line_mean`), which gives exact interference with any amplitude that is
/// smooth across a bin. The part of |L|^2 that the bin average misses is kept
/// as `line_residual` (intensity per unit photon energy, per bin); it behaves
/// as one extra photon mode carrying the amplitude beta(t1, eps). Populations,
/// spectra and mode density matrices include it. `gamma_pointwise()` gives
/// the sampled amplitude for direct comparison with a propagated state.
struct AmplitudeSet {
  EnergyGrid electron_grid;
  EnergyGrid photon_grid;
  double t0 = 0.0;
  double t1 = 0.0;
  double eval_time = 0.0;

  std::vector<double> g_times;  // quadrature nodes in [t0, min(eval_time, t1)]
  std::vector<double> g_of_t;   // ground amplitude at those nodes
  double ground = 1.0;          // g(eval_time)

  CVector alpha;
  CVector beta;
  CMatrix gamma;
  CMatrix delta;

  CVector beta_pulse_end;  // beta(t1), source of post-pulse emission
  CVector line_point;      // -i V_sp L(eps_l) at the photon nodes
  CVector line_mean;       // -i V_sp times the bin average of L
  std::vector<double> line_residual;  // V_sp^2 (bin mean of |L|^2 - |bin mean of L|^2)

  /// Sum over bins of line_residual times the bin width.
  double residual_weight() const;

  CMatrix gamma_pointwise() const;
};

struct Populations {
  double g = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double sum() const { return g + alpha + beta + gamma + delta; }
};

/// Trapezoid-rule branch populations. Sums run in a fixed order.
Populations populations(const AmplitudeSet& amps);

struct EngineOptions {
  double max_step = 0.0;        // 0: default rule from the Rabi period and grids
  std::size_t workers = 1;      // threads for the photon-energy chunks
  bool second_order = true;     // false skips gamma and delta (left zero)
};

/// Ground-state amplitude g(t) = exp(-pi Omega_ag^2/4 * int_{t0}^{t} Lambda^2).
double ground_amplitude(const Pulse& pulse, const PhysicalConfig& config, double t);
std::vector<double> ground_amplitude(const Pulse& pulse, const PhysicalConfig& config,
                                     const TimeGrid& grid);

/// Evaluates all amplitudes of one pulse at arbitrary times. The expensive
/// pulse-end state is computed once on first use; later post-pulse times
/// only apply closed-form decay and emission. Thread-safe.
class AmplitudeSolver {
 public:
  AmplitudeSolver(PhysicalConfig config, const Pulse& pulse, EnergyGrid electron,
                  EnergyGrid photon, EngineOptions options = {});

  /// Throws DomainError for t < t0.
  AmplitudeSet at(double t) const;
  const AmplitudeSet& pulse_end() const;

  const PhysicalConfig& config() const { return config_; }
  const Pulse& pulse() const { return pulse_; }
  double step() const { return step_; }

 private:
  AmplitudeSet integrate_to(double te) const;
  AmplitudeSet extend(const AmplitudeSet& end, double t) const;

  PhysicalConfig config_;
  Pulse pulse_;
  EnergyGrid electron_;
  EnergyGrid photon_;
  EngineOptions options_;
  double step_ = 0.0;
  mutable std::once_flag end_once_;
  mutable std::unique_ptr<AmplitudeSet> end_;
};

/// alpha and beta on the electron grid at time t (gamma/delta skipped).
std::pair<CVector, CVector> first_order(const Pulse& pulse, const PhysicalConfig& config,
                                        const EnergyGrid& electron, double t,
                                        EngineOptions options = {});

/// gamma (bin-averaged line) and delta at time t.
std::pair<CMatrix, CMatrix> second_order(const Pulse& pulse, const PhysicalConfig& config,
                                         const EnergyGrid& electron, const EnergyGrid& photon,
                                         double t, EngineOptions options = {});

/// Pointwise post-pulse emission factor L(x) = int_{t1}^{t1+T} e^{i x t - a (t - t1)} dt.
cplx emission_line(double x, double t1, double T, double a);

/// Integral of |L(x)|^2 over [u, v] (closed-form smooth part plus
/// period-resolved Gauss panels for the oscillating part).
double emission_line_intensity(double u, double v, double T, double a);

/// Integral of L(x) over [u, v] for a line emitted from t1 on.
cplx emission_line_integral(double u, double v, double t1, double T, double a);

}  // namespace qent
