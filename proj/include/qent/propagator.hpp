#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qent/amplitudes.hpp"
#include "qent/pulse.hpp"
#include "qent/units.hpp"

namespace qent {

using Vector5 = Eigen::Matrix<cplx, 5, 1>;
using Matrix5 = Eigen::Matrix<cplx, 5, 5>;

/// Schrodinger-picture amplitudes ordered (g, alpha, beta, gamma, delta).
struct FiveLevelState {
  Vector5 c = Vector5::Zero();
  double t = 0.0;
  double norm() const { return c.squaredNorm(); }
};

/// Five-level non-Hermitian Hamiltonian for one (eps, eps_l) continuum pair.
/// Diagonal: -i Gamma/2, eps, eps - i kappa/2, eps + eps_l, eps + eps_l - i kappa/2,
/// with Gamma = 2 pi V_I^2. Couplings: V_I = Omega_ag Lambda / 2 from g to alpha
/// only, Omega/2 symmetric on (alpha, beta) and (gamma, delta), V_sp from beta
/// to gamma only.
Matrix5 build_hamiltonian(const PhysicalConfig& config, const Pulse& pulse, double t, double eps,
                          double eps_l);

/// Fixed-step RK4 inside the pulse followed by exact constant-Hamiltonian
/// evolution after it. Construct once per pulse and step; `propagate` is
/// const and may run concurrently.
class FiveLevelPropagator {
 public:
  /// step <= 0 selects the default quadrature step of the config.
  /// Throws NumericalError if the step advances the phase by more than pi/4;
  /// the message suggests an admissible step.
  FiveLevelPropagator(PhysicalConfig config, const Pulse& pulse, double step, double eps_bound);

  /// States at each requested time (ascending, each >= t1), starting from
  /// (1, 0, 0, 0, 0) at t0. Times equal to t1 return the end-of-pulse state.
  std::vector<FiveLevelState> propagate(double eps, double eps_l, const std::vector<double>& times) const;

  /// State at a time inside or at the end of the pulse, on this step grid.
  FiveLevelState propagate_pulse(double eps, double eps_l) const;

  double step() const { return h_; }
  std::size_t steps() const { return n_steps_; }

  /// Largest step with phase advance at most pi/4 for |eps|, |eps_l| <= eps_bound.
  static double admissible_step(const PhysicalConfig& config, const Pulse& pulse, double eps_bound);

 private:
  PhysicalConfig config_;
  double t0_ = 0.0;
  double t1_ = 0.0;
  double h_ = 0.0;
  std::size_t n_steps_ = 0;
  std::vector<double> lambda_;  // envelope at t0 + k h / 2
};

/// Convenience wrapper: builds a propagator for `grid` (step = grid step)
/// and returns the state at t1 followed by the states at the checkpoints.
std::vector<FiveLevelState> rk4_propagate(const PhysicalConfig& config, const Pulse& pulse, double eps,
                                          double eps_l, const TimeGrid& grid);

/// Indices into the electron and photon grids selected for a comparison.
struct GridSubset {
  std::vector<std::size_t> electron;
  std::vector<std::size_t> photon;
  /// n_e x n_l indices spread evenly over both grids, ends included.
  static GridSubset even(const EnergyGrid& electron, const EnergyGrid& photon, std::size_t n_e,
                         std::size_t n_l);
};

/// Amplitudes of one evaluation time sampled on a subset, Schrodinger picture.
/// Pair-indexed arrays are row-major: pair = i * photon.size() + j.
struct SampledAmplitudes {
  double time = 0.0;
  cplx g;
  std::vector<cplx> alpha, beta, gamma, delta;
};

/// Analytic amplitudes on the subset, using the pointwise emission line.
SampledAmplitudes sample_analytic(const AmplitudeSet& amps, const GridSubset& subset);

/// Propagated amplitudes on the subset at `time`.
SampledAmplitudes sample_propagated(const FiveLevelPropagator& propagator, const AmplitudeSet& grids,
                                    const GridSubset& subset, double time, std::size_t workers = 1);

struct AmplitudeDeviation {
  std::string name;
  double max_rel = 0.0;  // max |a - r| / max |r|
  double l2_rel = 0.0;   // ||a - r|| / ||r||
};

struct OracleReport {
  double time = 0.0;
  double tolerance = 1e-3;
  std::vector<AmplitudeDeviation> rows;  // g, alpha, beta, gamma, delta
  bool pass = false;
};

/// Per-amplitude deviations of `analytic` from `reference`. Throws
/// DomainError when the samples do not have matching shapes.
OracleReport compare_samples(const SampledAmplitudes& analytic, const SampledAmplitudes& reference,
                             double tolerance = 1e-3);

/// Propagates every subset pair to analytic.eval_time and compares.
OracleReport oracle_compare(const AmplitudeSet& analytic, const FiveLevelPropagator& propagator,
                            const GridSubset& subset, std::size_t workers = 1, double tolerance = 1e-3);

}  // namespace qent
