#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qent/format.hpp"
#include "qent/units.hpp"

namespace qent::cli {

namespace {

struct Crossing {
  double time;   // a.u. after the pulse end
  double value;  // common value at the crossing
};

// First sign change of a - b along the post-pulse segment, linearly interpolated.
template <class A, class B>
std::optional<Crossing> first_crossing(const EntanglementTrace& trace, A a, B b) {
  const TracePoint* prev = nullptr;
  for (const TracePoint& p : trace.points) {
    if (p.segment != 2) continue;
    if (prev) {
      const double d0 = a(*prev) - b(*prev);
      const double d1 = a(p) - b(p);
      if (d0 > 0.0 && d1 <= 0.0) {
        const double s = d0 / (d0 - d1);
        return Crossing{prev->after_pulse + s * (p.after_pulse - prev->after_pulse),
                        a(*prev) + s * (a(p) - a(*prev))};
      }
    }
    prev = &p;
  }
  return std::nullopt;
}

CriterionResult result(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

std::string num(double x) { return format_number(x); }

std::size_t index_of(Partition p) {
  return static_cast<std::size_t>(std::find(all_partitions.begin(), all_partitions.end(), p) - all_partitions.begin());
}

double dimension_bound(Partition p, const RunConfig& config) {
  switch (p) {
    case Partition::electron_ion:
    case Partition::electron_photon_number: return 2.0;
    case Partition::qutrit: return 3.0;
    case Partition::ququart: return 4.0;
    case Partition::modes: return static_cast<double>(config.photon_grid.size() + 1);
  }
  return 1.0;
}

}  // namespace

void CheckSet::append(const CheckSet& other) {
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  figures.insert(figures.end(), other.figures.begin(), other.figures.end());
  values.insert(values.end(), other.values.begin(), other.values.end());
}

bool CheckSet::gates_pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const CriterionResult& c) { return c.pass; });
}

CheckSet check_populations(const RunConfig& config, const EntanglementTrace& trace) {
  CheckSet out;
  double worst = 0.0;
  for (const TracePoint& p : trace.points) worst = std::max(worst, std::abs(p.pops.sum() - 1.0));
  out.gates.push_back(result("norm_sum", worst <= 5e-3, "max |sum P - 1| = " + num(worst)));
  out.values.push_back({"norm_sum_max_deviation", worst});

  double survival = std::numeric_limits<double>::quiet_NaN();
  for (const TracePoint& p : trace.points)
    if (p.segment == 1) survival = p.pops.g;
  const auto cross = first_crossing(
      trace, [](const TracePoint& p) { return p.pops.beta; }, [](const TracePoint& p) { return p.pops.gamma; });
  const double half_time = std::numbers::ln2 / config.physics.kappa;
  const double ratio = cross ? cross->time / half_time : std::numeric_limits<double>::quiet_NaN();
  const bool pass = std::abs(survival - 0.80) <= 0.02 && cross && ratio >= 1.0 / 1.2 && ratio <= 1.2;
  out.figures.push_back(result("ground_survival_and_transfer", pass,
                               "P_g(t1) = " + num(survival) + ", P_beta/P_gamma crossing at " + num(ratio) +
                                   " ln2/kappa"));
  out.values.push_back({"ground_survival", survival});
  out.values.push_back({"beta_gamma_crossing_over_ln2_kappa", ratio});
  return out;
}

CheckSet check_transfer(const RunConfig& config, const EntanglementTrace& trace) {
  CheckSet out = check_populations(config, trace);

  double worst_excess = 0.0;
  for (const TracePoint& p : trace.points)
    for (Partition part : all_partitions) {
      const PartitionMeasures& m = p.measures[index_of(part)];
      if (!m.defined) continue;
      const double d = dimension_bound(part, config);
      worst_excess = std::max({worst_excess, -m.entropy, m.entropy - std::log2(d),
                               m.concurrence - std::sqrt(2.0 - 2.0 / d)});
    }
  out.gates.push_back(result("measure_bounds", worst_excess <= 1e-9,
                             "largest excess over [0, log2 d] or sqrt(2 - 2/d): " + num(worst_excess)));

  const auto s = [](Partition part) {
    return [k = index_of(part)](const TracePoint& p) { return p.measures[k].entropy; };
  };
  const auto c = [](Partition part) {
    return [k = index_of(part)](const TracePoint& p) { return p.measures[k].concurrence; };
  };

  // Electron-ion entanglement over the duration scan, photon-number entanglement at the end.
  const double tr = config.physics.rabi_period();
  double ab_min = 1.0;
  for (const TracePoint& p : trace.points)
    if (p.segment == 1 && p.tau >= tr) ab_min = std::min(ab_min, s(Partition::electron_ion)(p));
  const double ac_end = trace.points.empty() ? 0.0 : s(Partition::electron_photon_number)(trace.points.back());
  const auto ab_ac = first_crossing(trace, s(Partition::electron_ion), s(Partition::electron_photon_number));
  const double ab_ac_value = ab_ac ? ab_ac->value : std::numeric_limits<double>::quiet_NaN();
  out.figures.push_back(result("electron_ion_and_photon_entropy",
                               ab_min >= 0.98 && ac_end >= 0.95 && std::abs(ab_ac_value - 0.90) <= 0.05,
                               "min S_AB(tau >= T_R) = " + num(ab_min) + ", S_AC(tf) = " + num(ac_end) +
                                   ", AB/AC crossing at S = " + num(ab_ac_value)));
  out.values.push_back({"S_AB_min_over_scan", ab_min});
  out.values.push_back({"S_AC_final", ac_end});
  out.values.push_back({"S_AB_AC_crossing", ab_ac_value});

  double q4_peak = 0.0, c4_peak = 0.0, gap = 0.0;
  for (const TracePoint& p : trace.points) {
    if (p.segment != 2) continue;
    q4_peak = std::max(q4_peak, s(Partition::ququart)(p));
    c4_peak = std::max(c4_peak, c(Partition::ququart)(p));
  }
  for (const TracePoint& p : trace.points)
    gap = std::max(gap, std::abs(s(Partition::qutrit)(p) - s(Partition::ququart)(p)));
  const bool q_pass = q4_peak >= 1.4 && q4_peak <= std::log2(3.0) && gap <= 1e-3 && c4_peak >= 1.0 &&
                      c4_peak <= std::sqrt(4.0 / 3.0);
  out.figures.push_back(result("branch_entropy", q_pass,
                               "ququart peak " + num(q4_peak) + " bits, max |qutrit - ququart| = " + num(gap) +
                                   ", concurrence peak " + num(c4_peak)));
  out.values.push_back({"S_ququart_peak", q4_peak});
  out.values.push_back({"C_ququart_peak", c4_peak});
  out.values.push_back({"qutrit_ququart_max_gap", gap});

  double modes_peak = 0.0, modes_peak_time = 0.0;
  for (const TracePoint& p : trace.points)
    if (p.segment == 2 || p.tau == config.pulse.tau) {
      const double v = s(Partition::modes)(p);
      if (v > modes_peak) {
        modes_peak = v;
        modes_peak_time = p.after_pulse;
      }
    }
  out.values.push_back({"S_modes_peak", modes_peak});
  out.values.push_back({"S_modes_peak_after_pulse_fs", units::au_to_fs(modes_peak_time)});
  return out;
}

CheckSet check_sweep(const std::vector<SweepRow>& rows, const TripletResult& triplet) {
  CheckSet out;
  double flattop_best = 0.0;
  bool below = true;
  std::size_t matched = 0;
  for (const SweepRow& f : rows) {
    if (f.shape != PulseKind::flattop) continue;
    const double tau_fs = units::au_to_fs(f.tau);
    if (tau_fs >= 50.0 && tau_fs <= 400.0) flattop_best = std::max(flattop_best, f.entropy_max);
    for (const SweepRow& g : rows)
      if (g.shape == PulseKind::gaussian && g.tau == f.tau) {
        ++matched;
        below = below && g.entropy_max < f.entropy_max;
      }
  }
  out.figures.push_back(result("duration_sweep", flattop_best > std::log2(5.0) && below && matched > 0,
                               "flattop max S_modes in [50, 400] fs = " + num(flattop_best) +
                                   " bits, gaussian below flattop at " + (below ? "all " : "not all ") +
                                   std::to_string(matched) + " durations"));
  out.values.push_back({"flattop_S_modes_max", flattop_best});

  const double w = triplet.splitting;
  const bool offsets_ok = triplet.resolved && std::abs(-triplet.left_offset - w) <= 0.1 * w &&
                          std::abs(triplet.right_offset - w) <= 0.1 * w;
  const bool ratios_ok = triplet.resolved && std::abs(triplet.left_ratio / 0.5 - 1.0) <= 0.2 &&
                         std::abs(triplet.right_ratio / 0.5 - 1.0) <= 0.2;
  out.figures.push_back(result(
      "fluorescence_triplet", offsets_ok && ratios_ok,
      triplet.resolved ? "side peaks at " + num(units::au_to_ev(triplet.left_offset)) + ", +" +
                             num(units::au_to_ev(triplet.right_offset)) + " eV (Omega_0 = " +
                             num(units::au_to_ev(w)) + " eV), heights " + num(triplet.left_ratio) + " : 1 : " +
                             num(triplet.right_ratio)
                       : "triplet not resolved"));
  out.values.push_back({"triplet_left_offset_eV", units::au_to_ev(triplet.left_offset)});
  out.values.push_back({"triplet_right_offset_eV", units::au_to_ev(triplet.right_offset)});
  out.values.push_back({"triplet_left_ratio", triplet.left_ratio});
  out.values.push_back({"triplet_right_ratio", triplet.right_ratio});
  return out;
}

CheckSet check_two_pulse(const RunConfig& config, const TwoPulseResult& r) {
  CheckSet out;
  out.figures.push_back(result("even_fringes", r.fringe_run >= 4,
                               std::to_string(r.fringe_run) + " consecutive fringes spaced pi/t_delta = " +
                                   num(units::au_to_ev(r.fringe_expected)) + " eV within one bin (" +
                                   num(units::au_to_ev(r.bin)) + " eV)"));
  out.figures.push_back(result("odd_avoidance", r.overlap_gap >= 0.3,
                               "overlap(alpha, gamma_bar) at tf: even " + num(r.cases[1].overlap_alpha_gamma_tf) +
                                   ", odd " + num(r.cases[2].overlap_alpha_gamma_tf)));
  for (const CaseSpectra& c : r.cases) {
    out.values.push_back({c.name + "_overlap_alpha_beta_t1", c.overlap_alpha_beta_t1});
    out.values.push_back({c.name + "_overlap_alpha_gamma_bar_tf", c.overlap_alpha_gamma_tf});
  }
  out.values.push_back({"overlap_gap", r.overlap_gap});
  out.values.push_back({"fringe_run", static_cast<double>(r.fringe_run)});
  out.values.push_back({"even_odd_delay_difference_as", 1000.0 * units::au_to_fs(r.delay_difference)});
  out.values.push_back({"half_carrier_period_as", 1000.0 * units::au_to_fs(std::numbers::pi / config.physics.omega0)});
  return out;
}

CheckSet check_oracle(const std::vector<OracleReport>& reports) {
  CheckSet out;
  for (const OracleReport& r : reports) {
    double worst = 0.0;
    for (const AmplitudeDeviation& d : r.rows) worst = std::max(worst, d.l2_rel);
    out.gates.push_back(result("oracle_t_" + num(units::au_to_fs(r.time)) + "_fs", r.pass,
                               "max relative L2 deviation " + num(worst) + " (tolerance " + num(r.tolerance) + ")"));
    out.values.push_back({"oracle_max_l2_t_" + num(units::au_to_fs(r.time)) + "_fs", worst});
  }
  return out;
}

}  // namespace qent::cli
