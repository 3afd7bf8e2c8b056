#include "qent/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "qent/errors.hpp"
#include "qent/format.hpp"
#include "qent/parallel.hpp"

namespace qent {

namespace {

constexpr cplx I{0.0, 1.0};

Matrix5 hamiltonian(const PhysicalConfig& config, double lambda, double eps, double eps_l) {
  const double v_i = 0.5 * config.ionization_coupling() * lambda;
  const double half_rabi = 0.5 * config.rabi_frequency() * lambda;
  const double gamma_i = 2.0 * std::numbers::pi * v_i * v_i;
  const double half_kappa = 0.5 * config.kappa;
  Matrix5 h = Matrix5::Zero();
  h(0, 0) = cplx(0.0, -0.5 * gamma_i);
  h(1, 1) = eps;
  h(2, 2) = cplx(eps, -half_kappa);
  h(3, 3) = eps + eps_l;
  h(4, 4) = cplx(eps + eps_l, -half_kappa);
  h(1, 0) = v_i;
  h(1, 2) = h(2, 1) = half_rabi;
  h(3, 4) = h(4, 3) = half_rabi;
  h(3, 2) = config.v_sp;
  return h;
}

// dc/dt = -i H c, written out for the sparse structure of H.
Vector5 derivative(const PhysicalConfig& config, double lambda, double eps, double eps_l, const Vector5& c) {
  const double v_i = 0.5 * config.ionization_coupling() * lambda;
  const double w = 0.5 * config.rabi_frequency() * lambda;
  const cplx e_b(eps, -0.5 * config.kappa);
  const cplx e_d(eps + eps_l, -0.5 * config.kappa);
  Vector5 hc;
  hc[0] = cplx(0.0, -std::numbers::pi * v_i * v_i) * c[0];
  hc[1] = v_i * c[0] + eps * c[1] + w * c[2];
  hc[2] = w * c[1] + e_b * c[2];
  hc[3] = config.v_sp * c[2] + (eps + eps_l) * c[3] + w * c[4];
  hc[4] = w * c[3] + e_d * c[4];
  return -I * hc;
}

// Exact evolution over dt >= 0 after the pulse: H is constant and couples
// only beta to gamma.
Vector5 evolve_free(const PhysicalConfig& config, const Vector5& c, double dt, double eps, double eps_l) {
  const double a = 0.5 * config.kappa;
  const double e_g = eps + eps_l;
  const cplx ph_b = std::polar(std::exp(-a * dt), -eps * dt);
  const cplx ph_g = std::polar(1.0, -e_g * dt);
  const cplx z(-a, eps_l);
  cplx feed;
  if (std::abs(z) * dt < 1e-8) {
    feed = dt * (1.0 + 0.5 * z * dt);
  } else {
    const double s = std::sin(0.5 * eps_l * dt);
    const cplx em1(std::expm1(-a * dt) * std::cos(eps_l * dt) - 2.0 * s * s, std::exp(-a * dt) * std::sin(eps_l * dt));
    feed = em1 / z;
  }
  Vector5 out;
  out[0] = c[0];
  out[1] = c[1] * std::polar(1.0, -eps * dt);
  out[2] = c[2] * ph_b;
  out[3] = ph_g * (c[3] - I * config.v_sp * c[2] * feed);
  out[4] = c[4] * std::polar(std::exp(-a * dt), -e_g * dt);
  return out;
}

double row_sum_bound(const PhysicalConfig& config, double lambda_max, double eps_bound) {
  const double v_i = 0.5 * config.ionization_coupling() * lambda_max;
  const double w = 0.5 * config.rabi_frequency() * lambda_max;
  const double k = 0.5 * config.kappa;
  const double rows[5] = {std::numbers::pi * v_i * v_i, v_i + eps_bound + w, w + eps_bound + k,
                          config.v_sp + 2.0 * eps_bound + w, w + 2.0 * eps_bound + k};
  return *std::max_element(rows, rows + 5);
}

}  // namespace

Matrix5 build_hamiltonian(const PhysicalConfig& config, const Pulse& pulse, double t, double eps,
                          double eps_l) {
  return hamiltonian(config, pulse.envelope(t), eps, eps_l);
}

double FiveLevelPropagator::admissible_step(const PhysicalConfig& config, const Pulse& pulse,
                                            double eps_bound) {
  double lambda_max = 0.0;
  constexpr int samples = 4096;
  for (int k = 0; k <= samples; ++k) {
    const double t = pulse.t0() + (pulse.t1() - pulse.t0()) * k / samples;
    lambda_max = std::max(lambda_max, std::abs(pulse.envelope(t)));
  }
  const double bound = row_sum_bound(config, lambda_max, eps_bound);
  return bound > 0.0 ? 0.25 * std::numbers::pi / bound : pulse.t1() - pulse.t0();
}

FiveLevelPropagator::FiveLevelPropagator(PhysicalConfig config, const Pulse& pulse, double step,
                                         double eps_bound)
    : config_(config), t0_(pulse.t0()), t1_(pulse.t1()) {
  if (step <= 0.0) step = max_pulse_step(config_.rabi_period(), eps_bound);
  const double limit = admissible_step(config_, pulse, eps_bound);
  if (!(step <= limit)) {
    std::ostringstream msg;
    msg << "RK4 step " << format_number(step) << " a.u. advances the phase by more than pi/4; use a step of at most "
        << format_number(limit) << " a.u.";
    throw NumericalError(msg.str());
  }
  n_steps_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t1_ - t0_) / step)));
  h_ = (t1_ - t0_) / static_cast<double>(n_steps_);
  lambda_.resize(2 * n_steps_ + 1);
  for (std::size_t k = 0; k < lambda_.size(); ++k) {
    const double t = k + 1 == lambda_.size() ? t1_ : t0_ + 0.5 * h_ * static_cast<double>(k);
    lambda_[k] = pulse.envelope(t);
  }
}

FiveLevelState FiveLevelPropagator::propagate_pulse(double eps, double eps_l) const {
  Vector5 c = Vector5::Zero();
  c[0] = 1.0;
  for (std::size_t k = 0; k < n_steps_; ++k) {
    const double l0 = lambda_[2 * k], lm = lambda_[2 * k + 1], l1 = lambda_[2 * k + 2];
    const Vector5 k1 = derivative(config_, l0, eps, eps_l, c);
    const Vector5 k2 = derivative(config_, lm, eps, eps_l, c + 0.5 * h_ * k1);
    const Vector5 k3 = derivative(config_, lm, eps, eps_l, c + 0.5 * h_ * k2);
    const Vector5 k4 = derivative(config_, l1, eps, eps_l, c + h_ * k3);
    c += (h_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {c, t1_};
}

std::vector<FiveLevelState> FiveLevelPropagator::propagate(double eps, double eps_l,
                                                           const std::vector<double>& times) const {
  std::vector<FiveLevelState> out;
  out.reserve(times.size());
  FiveLevelState state = propagate_pulse(eps, eps_l);
  for (double t : times) {
    if (t < state.t) throw DomainError("propagation times must be ascending and not precede t1");
    state.c = evolve_free(config_, state.c, t - state.t, eps, eps_l);
    state.t = t;
    out.push_back(state);
  }
  return out;
}

std::vector<FiveLevelState> rk4_propagate(const PhysicalConfig& config, const Pulse& pulse, double eps,
                                          double eps_l, const TimeGrid& grid) {
  const FiveLevelPropagator prop(config, pulse, grid.step(), std::max(std::abs(eps), std::abs(eps_l)));
  std::vector<double> times{pulse.t1()};
  times.insert(times.end(), grid.checkpoints.begin(), grid.checkpoints.end());
  return prop.propagate(eps, eps_l, times);
}

GridSubset GridSubset::even(const EnergyGrid& electron, const EnergyGrid& photon, std::size_t n_e,
                            std::size_t n_l) {
  auto pick = [](std::size_t size, std::size_t count) {
    count = std::clamp<std::size_t>(count, 1, size);
    std::vector<std::size_t> idx(count);
    for (std::size_t k = 0; k < count; ++k)
      idx[k] = count == 1 ? size / 2
                          : static_cast<std::size_t>(std::llround(static_cast<double>(k) * (size - 1) /
                                                                  static_cast<double>(count - 1)));
    return idx;
  };
  return {pick(electron.size(), n_e), pick(photon.size(), n_l)};
}

SampledAmplitudes sample_analytic(const AmplitudeSet& amps, const GridSubset& subset) {
  for (auto i : subset.electron)
    if (i >= amps.electron_grid.size()) throw DomainError("electron subset index outside the grid");
  for (auto j : subset.photon)
    if (j >= amps.photon_grid.size()) throw DomainError("photon subset index outside the grid");
  const double t = amps.eval_time;
  SampledAmplitudes s;
  s.time = t;
  s.g = amps.ground;
  for (auto i : subset.electron) {
    const double e = amps.electron_grid[i];
    const cplx ph_e = std::polar(1.0, -e * t);
    for (auto j : subset.photon) {
      const double x = amps.photon_grid[j];
      const cplx ph_l = std::polar(1.0, -(e + x) * t);
      const cplx gamma = amps.gamma(i, j) + amps.beta_pulse_end[i] * (amps.line_point[j] - amps.line_mean[j]);
      s.alpha.push_back(amps.alpha[i] * ph_e);
      s.beta.push_back(amps.beta[i] * ph_e);
      s.gamma.push_back(gamma * ph_l);
      s.delta.push_back(amps.delta(i, j) * ph_l);
    }
  }
  return s;
}

SampledAmplitudes sample_propagated(const FiveLevelPropagator& propagator, const AmplitudeSet& grids,
                                    const GridSubset& subset, double time, std::size_t workers) {
  const std::size_t nl = subset.photon.size();
  const std::size_t pairs = subset.electron.size() * nl;
  std::vector<Vector5> states(pairs);
  parallel_for(
      pairs,
      [&](std::size_t p) {
        const double e = grids.electron_grid[subset.electron[p / nl]];
        const double x = grids.photon_grid[subset.photon[p % nl]];
        states[p] = propagator.propagate(e, x, {time}).front().c;
      },
      workers);
  SampledAmplitudes s;
  s.time = time;
  s.g = pairs > 0 ? states.front()[0] : cplx{1.0, 0.0};
  for (const auto& c : states) {
    s.alpha.push_back(c[1]);
    s.beta.push_back(c[2]);
    s.gamma.push_back(c[3]);
    s.delta.push_back(c[4]);
  }
  return s;
}

OracleReport compare_samples(const SampledAmplitudes& analytic, const SampledAmplitudes& reference,
                             double tolerance) {
  const std::size_t n = reference.alpha.size();
  for (const auto* v : {&analytic.alpha, &analytic.beta, &analytic.gamma, &analytic.delta, &reference.beta,
                        &reference.gamma, &reference.delta})
    if (v->size() != n) throw DomainError("sampled amplitudes have mismatched shapes");

  auto deviation = [](std::string name, const std::vector<cplx>& a, const std::vector<cplx>& r) {
    double diff2 = 0.0, ref2 = 0.0, diff_max = 0.0, ref_max = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double d = std::abs(a[k] - r[k]);
      diff2 += d * d;
      ref2 += std::norm(r[k]);
      diff_max = std::max(diff_max, d);
      ref_max = std::max(ref_max, std::abs(r[k]));
    }
    AmplitudeDeviation dev{std::move(name), 0.0, 0.0};
    if (ref2 > 0.0) {
      dev.l2_rel = std::sqrt(diff2 / ref2);
      dev.max_rel = diff_max / ref_max;
    } else if (diff2 > 0.0) {
      dev.l2_rel = dev.max_rel = std::numeric_limits<double>::infinity();
    }
    return dev;
  };

  OracleReport report;
  report.time = reference.time;
  report.tolerance = tolerance;
  report.rows.push_back(deviation("g", {analytic.g}, {reference.g}));
  report.rows.push_back(deviation("alpha", analytic.alpha, reference.alpha));
  report.rows.push_back(deviation("beta", analytic.beta, reference.beta));
  report.rows.push_back(deviation("gamma", analytic.gamma, reference.gamma));
  report.rows.push_back(deviation("delta", analytic.delta, reference.delta));
  report.pass = std::all_of(report.rows.begin(), report.rows.end(),
                            [tolerance](const AmplitudeDeviation& d) { return d.l2_rel < tolerance; });
  return report;
}

OracleReport oracle_compare(const AmplitudeSet& analytic, const FiveLevelPropagator& propagator,
                            const GridSubset& subset, std::size_t workers, double tolerance) {
  if (analytic.eval_time < analytic.t1) throw DomainError("the oracle compares states at or after the pulse end");
  const auto a = sample_analytic(analytic, subset);
  const auto r = sample_propagated(propagator, analytic, subset, analytic.eval_time, workers);
  return compare_samples(a, r, tolerance);
}

}  // namespace qent
