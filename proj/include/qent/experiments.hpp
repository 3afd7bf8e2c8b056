#pragma once

#include <array>
#include <string>
#include <vector>

#include "qent/conditioning.hpp"
#include "qent/config.hpp"
#include "qent/observables.hpp"
#include "qent/propagator.hpp"

namespace qent {

inline constexpr std::array<Partition, 5> all_partitions = {
    Partition::electron_ion, Partition::electron_photon_number, Partition::qutrit, Partition::ququart,
    Partition::modes};

struct PartitionMeasures {
  double entropy = 0.0;      // bits
  double concurrence = 0.0;
  bool defined = false;      // false when the conditioning outcome has zero probability
};

/// One point of the composite time axis. Segment 1 scans the pulse duration
/// at the pulse end; segment 2 fixes tau = tau_max and follows the decay.
struct TracePoint {
  int segment = 1;
  double tau = 0.0;          // a.u.
  double time_axis = 0.0;    // tau (segment 1) or tau_max + (t - t1) (segment 2), a.u.
  double after_pulse = 0.0;  // t - t1, a.u.
  Populations pops;
  std::array<PartitionMeasures, 5> measures{};  // indexed like all_partitions
};

struct EntanglementTrace {
  std::vector<TracePoint> points;
};

struct TraceOptions {
  std::size_t n_tau = 24;      // durations tau_max * k / n_tau, k = 1..n_tau
  bool with_measures = true;   // false: populations only
  std::size_t workers = 1;
  ConditioningOptions conditioning;
};

/// Duration scan up to the configured tau, then the post-pulse checkpoints
/// of the configured time grid.
EntanglementTrace run_transfer_trace(const RunConfig& config, const TraceOptions& options = {});

/// Measures of every partition for one amplitude set.
std::array<PartitionMeasures, 5> measure_partitions(const AmplitudeSet& amps,
                                                    const ConditioningOptions& conditioning = {});

struct SweepRow {
  PulseKind shape = PulseKind::flattop;
  double tau = 0.0;               // a.u.
  double entropy_max = 0.0;       // max over sampled times of S_vN(modes), bits
  double concurrence_max = 0.0;   // max over sampled times of C(modes)
  double time_of_max = 0.0;       // t - t1 at the entropy maximum, a.u.
  double ground_survival = 0.0;   // |g(t1)|^2
};

struct SweepOptions {
  std::vector<PulseKind> shapes{PulseKind::flattop, PulseKind::gaussian};
  std::size_t workers = 1;
};

/// Twelve durations, log-spaced from 10 fs to 1 ps (a.u.).
std::vector<double> default_sweep_durations();

/// Peak mode entanglement per (shape, tau) at fixed peak intensity. Times
/// sampled: the pulse end and t1 + {1, 10, 100} Rabi periods, 0.1/kappa, 1/kappa.
std::vector<SweepRow> run_duration_sweep(const RunConfig& config, const std::vector<double>& taus,
                                         const SweepOptions& options = {});

/// Fluorescence spectrum of a flattop pulse at the pulse end.
struct TripletResult {
  double tau = 0.0;
  double eval_time = 0.0;
  SpectrumCurve curve;       // gamma branch, photon axis
  std::vector<Peak> peaks;
  double splitting = 0.0;    // Omega_0, the expected side-peak offset
  bool resolved = false;     // a centre peak and one peak on either side were found
  double left_offset = 0.0;  // side-peak positions relative to the centre peak
  double right_offset = 0.0;
  double left_ratio = 0.0;   // side height / centre height
  double right_ratio = 0.0;
};

TripletResult run_fluorescence_triplet(const RunConfig& config, double tau);

struct CaseSpectra {
  std::string name;  // single, even, odd
  PulseSpec pulse;
  double t1 = 0.0;
  double tf = 0.0;
  std::vector<SpectrumCurve> electron_t1;  // alpha, beta, gamma_bar, delta_bar
  std::vector<SpectrumCurve> electron_tf;
  std::vector<SpectrumCurve> fluor_t1;     // gamma, delta
  std::vector<SpectrumCurve> fluor_tf;
  double overlap_alpha_beta_t1 = 0.0;
  double overlap_alpha_gamma_tf = 0.0;
  double ground_survival = 0.0;
};

struct TwoPulseResult {
  std::vector<CaseSpectra> cases;  // single, even, odd
  double fringe_expected = 0.0;    // pi / t_delta of the even pair, a.u.
  double bin = 0.0;                // electron grid step, a.u.
  std::vector<double> fringe_positions;
  std::size_t fringe_run = 0;      // most consecutive fringes spaced within one bin of expected
  double delay_difference = 0.0;   // |2 t_delta(even) - 2 t_delta(odd)|, a.u.
  double overlap_gap = 0.0;        // even minus odd overlap(alpha, gamma_bar) at tf
};

/// Single Gaussian and phase-locked even/odd double Gaussians, spectra at the
/// pulse end and at the configured final time.
TwoPulseResult run_two_pulse_suite(const RunConfig& config, std::size_t workers = 1);

/// Analytic amplitudes of the configured pulse against direct propagation of
/// the five-level equations on an n_sub x n_sub subset of the grids, at the
/// pulse end and at the configured final time.
std::vector<OracleReport> run_oracle_check(const RunConfig& config, std::size_t n_sub = 64,
                                           std::size_t workers = 1, double tolerance = 1e-3);

/// Longest run of consecutive peaks whose spacings all lie within `tolerance`
/// of `expected` (a single peak counts as a run of one).
std::size_t regular_run(const std::vector<double>& positions, double expected, double tolerance);

}  // namespace qent
