#include "qent/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qent/errors.hpp"
#include "qent/parallel.hpp"
#include "qent/quadrature.hpp"

namespace qent {

namespace {

constexpr std::size_t node_block = 512;    // time nodes per backward block
constexpr std::size_t photon_chunk = 32;   // photon columns per work item
constexpr cplx minus_i{0.0, -1.0};

// e^z - 1 without cancellation for small |z|.
cplx expm1(cplx z) {
  const double u = z.real();
  const double v = z.imag();
  const double s = std::sin(0.5 * v);
  return {std::expm1(u) * std::cos(v) - 2.0 * s * s, std::exp(u) * std::sin(v)};
}

// Integrates f over [u, v] with 8-point Gauss panels no wider than
// `max_width`, and narrower than half the distance to the Lorentzian centre
// (plus its half width a) so the peak at x = 0 is resolved.
template <class T, class F>
T panel_integral(F&& f, double u, double v, double max_width, double a) {
  static const quad::GaussRule rule = quad::gauss_legendre(8);
  T total{};
  double x = u;
  while (x < v) {
    double w = std::min(max_width, std::max(0.5 * (a + std::abs(x)), max_width / 16.0));
    w = std::min(w, v - x);
    const double mid = x + 0.5 * w;
    T sum{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(mid + 0.5 * w * rule.nodes[k]);
    total += 0.5 * w * sum;
    x = (v - x - w <= 1e-15 * std::abs(v)) ? v : x + w;
  }
  return total;
}

}  // namespace

double decay_constant(const PhysicalConfig& config, double t, double t1) {
  return t <= t1 ? 0.25 * config.kappa : 0.5 * config.kappa;
}

CMatrix AmplitudeSet::gamma_pointwise() const {
  CMatrix out = gamma;
  if (beta_pulse_end.size() == gamma.rows() && line_point.size() == gamma.cols())
    out.noalias() += beta_pulse_end * (line_point - line_mean).transpose();
  return out;
}

Populations populations(const AmplitudeSet& amps) {
  const auto we = amps.electron_grid.trapezoid_weights();
  const auto wl = amps.photon_grid.trapezoid_weights();
  Populations p;
  p.g = amps.ground * amps.ground;
  for (Eigen::Index i = 0; i < amps.alpha.size(); ++i) {
    p.alpha += we[i] * std::norm(amps.alpha[i]);
    p.beta += we[i] * std::norm(amps.beta[i]);
  }
  for (Eigen::Index j = 0; j < amps.gamma.cols(); ++j) {
    double col_g = 0.0;
    double col_d = 0.0;
    for (Eigen::Index i = 0; i < amps.gamma.rows(); ++i) {
      col_g += we[i] * std::norm(amps.gamma(i, j));
      col_d += we[i] * std::norm(amps.delta(i, j));
    }
    p.gamma += wl[j] * col_g;
    p.delta += wl[j] * col_d;
  }
  const double residual = amps.residual_weight();
  if (residual > 0.0) {
    double b2 = 0.0;
    for (Eigen::Index i = 0; i < amps.beta_pulse_end.size(); ++i) b2 += we[i] * std::norm(amps.beta_pulse_end[i]);
    p.gamma += residual * b2;
  }
  return p;
}

double ground_amplitude(const Pulse& pulse, const PhysicalConfig& config, double t) {
  const double w = config.ionization_coupling();
  const double end = std::min(t, pulse.t1());
  if (end <= pulse.t0()) return 1.0;
  return std::exp(-0.25 * std::numbers::pi * w * w * pulse.envelope_squared_integral(pulse.t0(), end));
}

std::vector<double> ground_amplitude(const Pulse& pulse, const PhysicalConfig& config,
                                     const TimeGrid& grid) {
  std::vector<double> g;
  g.reserve(grid.n_pulse + grid.checkpoints.size());
  for (std::size_t i = 0; i < grid.n_pulse; ++i) g.push_back(ground_amplitude(pulse, config, grid.node(i)));
  for (double t : grid.checkpoints) g.push_back(ground_amplitude(pulse, config, t));
  return g;
}

cplx emission_line(double x, double t1, double T, double a) {
  const cplx z{-a, x};
  const cplx phase = std::polar(1.0, x * t1);
  if (std::abs(z) * T < 1e-8) return phase * T * (1.0 + 0.5 * z * T);
  return phase * expm1(z * T) / z;
}

double emission_line_intensity(double u, double v, double T, double a) {
  if (!(v > u) || T <= 0.0) return 0.0;
  const double r = std::exp(-a * T);

  // Smooth part (1 - r)^2 / (x^2 + a^2), integrated in closed form.
  double smooth = 0.0;
  if (a > 0.0) {
    const double d = u * v > 0.0 ? std::atan(a * (v - u) / (a * a + u * v))
                                 : std::atan(v / a) - std::atan(u / a);
    smooth = (1.0 - r) * (1.0 - r) * d / a;
  }

  // Oscillating part 4 r sin^2(x T / 2) / (x^2 + a^2), resolved per half period.
  auto f = [T, a](double x) {
    const double den = x * x + a * a;
    if (den == 0.0) return 0.25 * T * T;
    const double s = std::sin(0.5 * x * T);
    return s * s / den;
  };
  const double osc = panel_integral<double>(f, u, v, std::numbers::pi / T, a);
  return smooth + 4.0 * r * osc;
}

cplx emission_line_integral(double u, double v, double t1, double T, double a) {
  if (!(v > u) || T <= 0.0) return {};
  auto f = [t1, T, a](double x) { return emission_line(x, t1, T, a); };
  return panel_integral<cplx>(f, u, v, std::numbers::pi / (std::abs(t1) + T), a);
}

double AmplitudeSet::residual_weight() const {
  const auto w = photon_grid.trapezoid_weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < line_residual.size(); ++j) sum += w[j] * line_residual[j];
  return sum;
}

AmplitudeSolver::AmplitudeSolver(PhysicalConfig config, const Pulse& pulse, EnergyGrid electron,
                                 EnergyGrid photon, EngineOptions options)
    : config_(config), pulse_(pulse), electron_(electron), photon_(photon), options_(options) {
  step_ = options_.max_step > 0.0
              ? options_.max_step
              : max_pulse_step(config_.rabi_period(), std::max(electron_.max_abs(), photon_.max_abs()));
  if (!(std::isfinite(step_) && step_ > 0.0)) throw DomainError("quadrature step must be positive");
  if (options_.workers == 0) options_.workers = default_workers();
}

const AmplitudeSet& AmplitudeSolver::pulse_end() const {
  std::call_once(end_once_, [this] { end_ = std::make_unique<AmplitudeSet>(integrate_to(pulse_.t1())); });
  return *end_;
}

AmplitudeSet AmplitudeSolver::at(double t) const {
  if (!std::isfinite(t) || t < pulse_.t0()) throw DomainError("evaluation time precedes the pulse");
  if (t < pulse_.t1()) return integrate_to(t);
  if (t == pulse_.t1()) return pulse_end();
  return extend(pulse_end(), t);
}

AmplitudeSet AmplitudeSolver::integrate_to(double te) const {
  const auto ne = static_cast<Eigen::Index>(electron_.size());
  const auto nl = static_cast<Eigen::Index>(photon_.size());
  const double t0 = pulse_.t0();

  AmplitudeSet s;
  s.electron_grid = electron_;
  s.photon_grid = photon_;
  s.t0 = t0;
  s.t1 = pulse_.t1();
  s.eval_time = te;
  s.alpha = CVector::Zero(ne);
  s.beta = CVector::Zero(ne);
  s.gamma = CMatrix::Zero(ne, nl);
  s.delta = CMatrix::Zero(ne, nl);
  s.beta_pulse_end = CVector::Zero(ne);
  s.line_point = CVector::Zero(nl);
  s.line_mean = CVector::Zero(nl);
  s.line_residual.assign(static_cast<std::size_t>(nl), 0.0);
  if (te <= t0) {
    s.g_times = {t0};
    s.g_of_t = {1.0};
    return s;
  }

  const std::size_t n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((te - t0) / step_)));
  const std::size_t n = n_steps + 1;
  const double h = (te - t0) / static_cast<double>(n_steps);
  const double omega0 = config_.rabi_frequency();
  const double w_ag = config_.ionization_coupling();
  const double k_pulse = decay_constant(config_, te, s.t1);

  std::vector<double> t(n), q(n), cn(n), sn(n), ch(n), sh(n);
  s.g_times.resize(n);
  s.g_of_t.resize(n);
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = k + 1 == n ? te : t0 + static_cast<double>(k) * h;
    theta[k] = omega0 * pulse_.envelope_integral(t0, t[k]);
    const double g = std::exp(-0.25 * std::numbers::pi * w_ag * w_ag * pulse_.envelope_squared_integral(t0, t[k]));
    s.g_times[k] = t[k];
    s.g_of_t[k] = g;
    const double weight = (k == 0 || k + 1 == n) ? 0.5 * h : h;
    q[k] = weight * pulse_.envelope(t[k]) * g * std::exp(-k_pulse * (te - t[k]));
    ch[k] = std::cos(0.5 * theta[k]);
    sh[k] = std::sin(0.5 * theta[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double rest = 0.5 * (theta[n - 1] - theta[k]);
    cn[k] = std::cos(rest);
    sn[k] = std::sin(rest);
  }
  s.ground = s.g_of_t.back();

  const bool second = options_.second_order && config_.v_sp != 0.0;
  const auto n_chunks = static_cast<std::size_t>((nl + photon_chunk - 1) / photon_chunk);

  // Running suffix sums over t' >= t_k of the four inner kernels, per photon
  // energy: {a(te,t') sin, a(te,t') cos, b(te,t') sin, b(te,t') cos} of Theta(t')/2.
  std::vector<cplx> r_sa(nl), r_ca(nl), r_sb(nl), r_cb(nl), f_sa_end(nl), f_ca_end(nl);
  for (Eigen::Index l = 0; l < nl; ++l) {
    const cplx ph = std::polar(1.0, photon_[l] * t[n - 1]);
    f_sa_end[l] = sh[n - 1] * ph;
    f_ca_end[l] = ch[n - 1] * ph;
  }

  const std::size_t n_blocks = (n + node_block - 1) / node_block;
  CMatrix e_block;
  CVector va, vb;
  for (std::size_t b = n_blocks; b-- > 0;) {
    const std::size_t kb = b * node_block;
    const std::size_t ke = std::min(n, kb + node_block);
    const auto len = static_cast<Eigen::Index>(ke - kb);

    e_block.resize(ne, len);
    for (Eigen::Index c = 0; c < len; ++c) {
      const double tk = t[kb + c];
      for (Eigen::Index i = 0; i < ne; ++i) e_block(i, c) = std::polar(1.0, electron_[i] * tk);
    }
    va.resize(len);
    vb.resize(len);
    for (Eigen::Index c = 0; c < len; ++c) {
      va[c] = q[kb + c] * cn[kb + c];
      vb[c] = minus_i * (q[kb + c] * sn[kb + c]);
    }
    s.alpha.noalias() += e_block * va;
    s.beta.noalias() += e_block * vb;

    if (!second) continue;
    parallel_for(
        n_chunks,
        [&](std::size_t chunk) {
          const auto l0 = static_cast<Eigen::Index>(chunk * photon_chunk);
          const auto width = std::min<Eigen::Index>(photon_chunk, nl - l0);
          CMatrix qg(len, width), qd(len, width);
          for (std::size_t k = ke; k-- > kb;) {
            const auto row = static_cast<Eigen::Index>(k - kb);
            const double a_s = cn[k] * sh[k], a_c = cn[k] * ch[k];
            const double b_s = sn[k] * sh[k], b_c = sn[k] * ch[k];
            for (Eigen::Index c = 0; c < width; ++c) {
              const Eigen::Index l = l0 + c;
              const cplx ph = std::polar(1.0, photon_[l] * t[k]);
              const cplx f_sa = a_s * ph, f_ca = a_c * ph;
              const cplx f_sb = minus_i * (b_s * ph), f_cb = minus_i * (b_c * ph);
              r_sa[l] += f_sa;
              r_ca[l] += f_ca;
              r_sb[l] += f_sb;
              r_cb[l] += f_cb;
              // Trapezoid suffix integrals from t_k to te (b(te,te) = 0).
              const cplx s_sa = h * (r_sa[l] - 0.5 * f_sa - 0.5 * f_sa_end[l]);
              const cplx s_ca = h * (r_ca[l] - 0.5 * f_ca - 0.5 * f_ca_end[l]);
              const cplx s_sb = h * (r_sb[l] - 0.5 * f_sb);
              const cplx s_cb = h * (r_cb[l] - 0.5 * f_cb);
              // b(t',t) = -i [sin(Theta'/2) cos(Theta/2) - cos(Theta'/2) sin(Theta/2)].
              qg(row, c) = q[k] * (minus_i * (ch[k] * s_sa - sh[k] * s_ca));
              qd(row, c) = q[k] * (minus_i * (ch[k] * s_sb - sh[k] * s_cb));
            }
          }
          s.gamma.middleCols(l0, width).noalias() += e_block * qg;
          s.delta.middleCols(l0, width).noalias() += e_block * qd;
        },
        options_.workers);
  }

  const cplx c1 = minus_i * (0.5 * w_ag);
  const cplx c2 = -0.5 * config_.v_sp * w_ag;
  s.alpha *= c1;
  s.beta *= c1;
  s.gamma *= c2;
  s.delta *= c2;
  if (te >= s.t1) s.beta_pulse_end = s.beta;
  return s;
}

AmplitudeSet AmplitudeSolver::extend(const AmplitudeSet& end, double t) const {
  AmplitudeSet s = end;
  s.eval_time = t;
  const double T = t - end.t1;
  const double a = decay_constant(config_, t, end.t1);
  const double r = std::exp(-a * T);
  s.beta *= r;
  s.delta *= r;
  if (!options_.second_order || config_.v_sp == 0.0) return s;

  const auto nl = static_cast<Eigen::Index>(photon_.size());
  const auto widths = photon_.trapezoid_weights();
  const double half = 0.5 * photon_.step();
  const double v2 = config_.v_sp * config_.v_sp;
  const cplx feed = minus_i * config_.v_sp;
  for (Eigen::Index j = 0; j < nl; ++j) {
    const double x = photon_[j];
    const double u = std::max(photon_.min(), x - half);
    const double v = std::min(photon_.max(), x + half);
    const double w = widths[j];
    const cplx mean = emission_line_integral(u, v, end.t1, T, a) / w;
    const double mean_sq = emission_line_intensity(u, v, T, a) / w;
    s.line_point[j] = feed * emission_line(x, end.t1, T, a);
    s.line_mean[j] = feed * mean;
    s.line_residual[j] = v2 * std::max(0.0, mean_sq - std::norm(mean));
  }
  s.gamma.noalias() += end.beta_pulse_end * s.line_mean.transpose();
  return s;
}

std::pair<CVector, CVector> first_order(const Pulse& pulse, const PhysicalConfig& config,
                                        const EnergyGrid& electron, double t, EngineOptions options) {
  options.second_order = false;
  const AmplitudeSolver solver(config, pulse, electron, electron, options);
  auto s = solver.at(t);
  return {std::move(s.alpha), std::move(s.beta)};
}

std::pair<CMatrix, CMatrix> second_order(const Pulse& pulse, const PhysicalConfig& config,
                                         const EnergyGrid& electron, const EnergyGrid& photon,
                                         double t, EngineOptions options) {
  options.second_order = true;
  const AmplitudeSolver solver(config, pulse, electron, photon, options);
  auto s = solver.at(t);
  return {std::move(s.gamma), std::move(s.delta)};
}

}  // namespace qent
