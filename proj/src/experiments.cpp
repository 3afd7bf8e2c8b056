#include "qent/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qent/errors.hpp"
#include "qent/measures.hpp"
#include "qent/parallel.hpp"
#include "qent/units.hpp"

namespace qent {

namespace {

AmplitudeSolver make_solver(const RunConfig& config, const PulseSpec& spec) {
  EngineOptions engine;
  engine.workers = 1;  // parallelism lives at the sweep level
  return AmplitudeSolver(config.physics, Pulse(spec), config.electron_grid, config.photon_grid, engine);
}

TracePoint make_point(int segment, double tau, double time_axis, double after_pulse,
                      const AmplitudeSet& amps, const TraceOptions& options) {
  TracePoint p;
  p.segment = segment;
  p.tau = tau;
  p.time_axis = time_axis;
  p.after_pulse = after_pulse;
  p.pops = populations(amps);
  if (options.with_measures) p.measures = measure_partitions(amps, options.conditioning);
  return p;
}

}  // namespace

std::array<PartitionMeasures, 5> measure_partitions(const AmplitudeSet& amps,
                                                    const ConditioningOptions& conditioning) {
  std::array<PartitionMeasures, 5> out;
  for (std::size_t k = 0; k < all_partitions.size(); ++k) {
    try {
      const ReducedDensity rho = reduced_density(amps, all_partitions[k], conditioning);
      out[k] = {von_neumann_entropy(rho), concurrence(rho), true};
    } catch (const UndefinedConditionError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out[k] = {nan, nan, false};
    }
  }
  return out;
}

EntanglementTrace run_transfer_trace(const RunConfig& config, const TraceOptions& options) {
  if (options.n_tau == 0) throw DomainError("run_transfer_trace: n_tau must be positive");
  const double tau_max = config.pulse.tau;

  std::vector<double> taus(options.n_tau);
  for (std::size_t k = 0; k < options.n_tau; ++k)
    taus[k] = tau_max * static_cast<double>(k + 1) / static_cast<double>(options.n_tau);

  EntanglementTrace trace;
  const auto scan = parallel_map(
      taus,
      [&](double tau) {
        PulseSpec spec = config.pulse;
        spec.tau = tau;
        const AmplitudeSolver solver = make_solver(config, spec);
        return make_point(1, tau, tau, 0.0, solver.pulse_end(), options);
      },
      options.workers);
  trace.points.insert(trace.points.end(), scan.begin(), scan.end());

  const AmplitudeSolver solver = make_solver(config, config.pulse);
  const TimeGrid grid = config.time_grid(solver.pulse());
  const double t1 = solver.pulse().t1();
  solver.pulse_end();  // shared by all checkpoints
  const auto decay = parallel_map(
      grid.checkpoints,
      [&](double t) { return make_point(2, tau_max, tau_max + (t - t1), t - t1, solver.at(t), options); },
      options.workers);
  trace.points.insert(trace.points.end(), decay.begin(), decay.end());
  return trace;
}

std::vector<double> default_sweep_durations() {
  constexpr std::size_t n = 12;
  std::vector<double> taus(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fs = 10.0 * std::pow(100.0, static_cast<double>(k) / static_cast<double>(n - 1));
    taus[k] = units::fs_to_au(fs);
  }
  return taus;
}

std::vector<SweepRow> run_duration_sweep(const RunConfig& config, const std::vector<double>& taus,
                                         const SweepOptions& options) {
  struct Job {
    PulseKind shape;
    double tau;
  };
  std::vector<Job> jobs;
  for (PulseKind shape : options.shapes) {
    if (shape != PulseKind::flattop && shape != PulseKind::gaussian)
      throw DomainError("run_duration_sweep: shapes must be flattop or gaussian");
    for (double tau : taus) jobs.push_back({shape, tau});
  }

  const double tr = config.physics.rabi_period();
  const double kappa = config.physics.kappa;
  const std::vector<double> offsets = {0.0, tr, 10.0 * tr, 100.0 * tr, 0.1 / kappa, 1.0 / kappa};

  return parallel_map(
      jobs,
      [&](const Job& job) {
        PulseSpec spec = config.pulse;
        spec.kind = job.shape;
        spec.tau = job.tau;
        const AmplitudeSolver solver = make_solver(config, spec);
        const double t1 = solver.pulse().t1();

        SweepRow row;
        row.shape = job.shape;
        row.tau = job.tau;
        row.entropy_max = -1.0;
        row.ground_survival = std::norm(solver.pulse_end().ground);
        for (double dt : offsets) {
          const AmplitudeSet amps = dt == 0.0 ? solver.pulse_end() : solver.at(t1 + dt);
          const ReducedDensity rho = rho_modes(amps);
          const double s = von_neumann_entropy(rho);
          row.concurrence_max = std::max(row.concurrence_max, concurrence(rho));
          if (s > row.entropy_max) {
            row.entropy_max = s;
            row.time_of_max = dt;
          }
        }
        return row;
      },
      options.workers);
}

TripletResult run_fluorescence_triplet(const RunConfig& config, double tau) {
  PulseSpec spec = config.pulse;
  spec.kind = PulseKind::flattop;
  spec.tau = tau;
  const AmplitudeSolver solver = make_solver(config, spec);
  // the pulse end, where the mode entanglement peaks; afterwards the free
  // decay piles a kappa-wide line onto the centre and buries the sidebands
  const AmplitudeSet& end = solver.pulse_end();

  TripletResult r;
  r.tau = tau;
  r.eval_time = end.t1;
  r.curve = fluorescence_spectrum(end, Branch::gamma_fluor);
  r.peaks = find_peaks(r.curve);
  r.splitting = config.physics.rabi_frequency();
  if (r.peaks.empty()) return r;

  // Centre = highest peak; sides = highest peak on each side of it.
  const auto centre = std::max_element(r.peaks.begin(), r.peaks.end(),
                                       [](const Peak& a, const Peak& b) { return a.height < b.height; });
  const Peak* left = nullptr;
  const Peak* right = nullptr;
  for (const Peak& p : r.peaks) {
    if (p.position < centre->position && (!left || p.height > left->height)) left = &p;
    if (p.position > centre->position && (!right || p.height > right->height)) right = &p;
  }
  if (!left || !right) return r;
  r.resolved = true;
  r.left_offset = left->position - centre->position;
  r.right_offset = right->position - centre->position;
  r.left_ratio = left->height / centre->height;
  r.right_ratio = right->height / centre->height;
  return r;
}

std::vector<OracleReport> run_oracle_check(const RunConfig& config, std::size_t n_sub,
                                           std::size_t workers, double tolerance) {
  const AmplitudeSolver solver = make_solver(config, config.pulse);
  const AmplitudeSet& end = solver.pulse_end();
  const double bound = std::max(config.electron_grid.max_abs(), config.photon_grid.max_abs());
  const FiveLevelPropagator propagator(config.physics, solver.pulse(), 0.0, bound);
  const GridSubset subset = GridSubset::even(config.electron_grid, config.photon_grid, n_sub, n_sub);

  std::vector<OracleReport> reports;
  reports.push_back(oracle_compare(end, propagator, subset, workers, tolerance));
  if (config.tf > end.t1)
    reports.push_back(oracle_compare(solver.at(config.tf), propagator, subset, workers, tolerance));
  return reports;
}

std::size_t regular_run(const std::vector<double>& positions, double expected, double tolerance) {
  if (positions.empty()) return 0;
  std::size_t best = 1;
  std::size_t run = 1;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    const double gap = positions[i] - positions[i - 1];
    run = std::abs(gap - expected) <= tolerance ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

TwoPulseResult run_two_pulse_suite(const RunConfig& config, std::size_t workers) {
  const double omega0 = config.physics.omega0;
  const double tau = config.pulse.tau;
  if (!(config.pulse.t_delta > 0.0)) throw DomainError("run_two_pulse_suite: t_delta must be positive");

  std::vector<std::pair<std::string, PulseSpec>> specs;
  specs.push_back({"single", PulseSpec{PulseKind::gaussian, tau, 0.0, 0.0, Parity::even}});
  for (Parity parity : {Parity::even, Parity::odd}) {
    const double td = parity_locked_delay(config.pulse.t_delta, parity, omega0);
    specs.push_back({std::string(to_string(parity)), PulseSpec{PulseKind::double_gaussian, tau, 0.0, td, parity}});
  }

  TwoPulseResult result;
  result.cases = parallel_map(
      specs,
      [&](const std::pair<std::string, PulseSpec>& item) {
        const AmplitudeSolver solver = make_solver(config, item.second);
        const AmplitudeSet& end = solver.pulse_end();
        const double tf = std::max(config.tf, end.t1);
        const AmplitudeSet fin = solver.at(tf);

        CaseSpectra c;
        c.name = item.first;
        c.pulse = item.second;
        c.t1 = end.t1;
        c.tf = tf;
        for (Branch b : {Branch::alpha, Branch::beta, Branch::gamma_bar, Branch::delta_bar}) {
          c.electron_t1.push_back(photoelectron_spectrum(end, b));
          c.electron_tf.push_back(photoelectron_spectrum(fin, b));
        }
        for (Branch b : {Branch::gamma_fluor, Branch::delta_fluor}) {
          c.fluor_t1.push_back(fluorescence_spectrum(end, b));
          c.fluor_tf.push_back(fluorescence_spectrum(fin, b));
        }
        c.overlap_alpha_beta_t1 = overlap_coefficient(c.electron_t1[0], c.electron_t1[1]);
        c.overlap_alpha_gamma_tf = overlap_coefficient(c.electron_tf[0], c.electron_tf[2]);
        c.ground_survival = std::norm(end.ground);
        return c;
      },
      workers);

  const CaseSpectra& even = result.cases[1];
  const CaseSpectra& odd = result.cases[2];
  result.fringe_expected = std::numbers::pi / even.pulse.t_delta;
  result.bin = config.electron_grid.step();
  for (const Peak& p : find_peaks(even.electron_t1[0])) result.fringe_positions.push_back(p.position);
  result.fringe_run = regular_run(result.fringe_positions, result.fringe_expected, result.bin);
  result.delay_difference = std::abs(2.0 * even.pulse.t_delta - 2.0 * odd.pulse.t_delta);
  result.overlap_gap = even.overlap_alpha_gamma_tf - odd.overlap_alpha_gamma_tf;
  return result;
}

}  // namespace qent
