#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qent/config.hpp"
#include "qent/errors.hpp"
#include "qent/pulse.hpp"
#include "qent/quadrature.hpp"
#include "support.hpp"

using namespace qent;

namespace {

PulseSpec gaussian(double tau_fs) { return {PulseKind::gaussian, units::fs_to_au(tau_fs), 0.0, 0.0, Parity::even}; }

PulseSpec pair(double tau_fs, double td_fs, Parity parity) {
  return {PulseKind::double_gaussian, units::fs_to_au(tau_fs), 0.0, units::fs_to_au(td_fs), parity};
}

}  // namespace

TEST_SUITE("pulse") {

TEST_CASE("gaussian envelope") {
  const Pulse p(gaussian(44.0));
  const double tau = units::fs_to_au(44.0);
  CHECK(p.envelope(0.0) == 1.0);
  CHECK(p.envelope(0.5 * tau) == doctest::Approx(std::exp(-std::numbers::ln2 / 2.0)).epsilon(1e-14));
  CHECK(p.envelope(0.5 * tau) * p.envelope(0.5 * tau) == doctest::Approx(0.5));
  CHECK(p.t1() == doctest::Approx(2.5 * tau));
  CHECK(p.t0() == doctest::Approx(-2.5 * tau));
  CHECK(p.envelope(p.t1() + 1.0) == 0.0);
  CHECK(p.envelope(p.t0() - 1.0) == 0.0);
}

TEST_CASE("pulse area of the default gaussian") {
  const RunConfig cfg = default_config();
  const Pulse p(cfg.pulse);
  const double theta = cumulative_area(p, cfg.physics, p.t0(), p.t1());
  // support cut at +-2.5 tau: the full Gaussian area times erf(2.5 sqrt(2 ln2))
  const double closed = cfg.physics.rabi_frequency() * cfg.pulse.tau * std::sqrt(std::numbers::pi / (2.0 * std::numbers::ln2)) *
                        std::erf(2.5 * std::sqrt(2.0 * std::numbers::ln2));
  CHECK(theta == doctest::Approx(closed).epsilon(1e-9));
  CHECK(theta / std::numbers::pi == doctest::Approx(6.1).epsilon(0.02));
  CHECK(cumulative_area(p, cfg.physics, 100.0, 100.0) == 0.0);
  CHECK(cumulative_area(p, cfg.physics, 200.0, -50.0) == doctest::Approx(-cumulative_area(p, cfg.physics, -50.0, 200.0)));
}

TEST_CASE("prefix tables against closed forms and adaptive quadrature") {
  const double tau = units::fs_to_au(30.0);
  const Pulse p(gaussian(30.0));
  const test::GaussianForms g{tau};
  // linear interpolation between table nodes is good to h^2/8 max|Lambda'|, about 1e-9 tau here
  const double bound = 2e-9 * tau;
  for (double t : {-50.0, 0.0, 123.4, 600.0}) {
    CHECK(std::abs(p.envelope_integral(p.t0(), t) - (g.integral(t) - g.integral(p.t0()))) <= bound);
    CHECK(std::abs(p.envelope_squared_integral(p.t0(), t) - (g.squared_integral(t) - g.squared_integral(p.t0()))) <=
          bound);
  }

  std::vector<Pulse> pulses = {Pulse(gaussian(44.0)), Pulse(pair(20.0, 60.0, Parity::even)),
                               Pulse(pair(20.0, 60.0, Parity::odd)),
                               Pulse({PulseKind::flattop, units::fs_to_au(100.0), units::fs_to_au(5.0), 0.0, Parity::even})};
  for (const Pulse& q : pulses) {
    const auto ref = quad::integrate_adaptive([&](double t) { return q.envelope(t) * q.envelope(t); }, q.t0(), q.t1(), 1e-12);
    REQUIRE(ref.converged);
    CHECK(q.envelope_squared_integral(q.t0(), q.t1()) == doctest::Approx(ref.value).epsilon(1e-8));
  }
}

TEST_CASE("area additivity over random triples") {
  const RunConfig cfg = default_config();
  const Pulse p(pair(30.0, 80.0, Parity::even));
  const double total = std::abs(cumulative_area(p, cfg.physics, p.t0(), p.t1()));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(p.t0(), p.t1());
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const double lhs = cumulative_area(p, cfg.physics, c, a);
    const double rhs = cumulative_area(p, cfg.physics, b, a) + cumulative_area(p, cfg.physics, c, b);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * total);
  }
}

TEST_CASE("double gaussian symmetry") {
  const Pulse even(pair(20.0, 50.0, Parity::even));
  const Pulse odd(pair(20.0, 50.0, Parity::odd));
  CHECK(odd.envelope(0.0) == 0.0);
  const double td = units::fs_to_au(50.0);
  CHECK(even.envelope(td) == doctest::Approx(1.0).epsilon(1e-6));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, even.t1());
  for (int k = 0; k < 200; ++k) {
    const double t = u(rng);
    CHECK(std::abs(even.envelope(t) - even.envelope(-t)) <= 1e-14);
    CHECK(std::abs(odd.envelope(t) + odd.envelope(-t)) <= 1e-14);
    CHECK(std::abs(even.envelope(t)) <= 2.0);
  }
  const RunConfig cfg = default_config();
  CHECK(std::abs(cumulative_area(odd, cfg.physics, odd.t0(), odd.t1())) < 1e-10);
  CHECK(even.t1() == doctest::Approx(td + 2.5 * units::fs_to_au(20.0)));
}

TEST_CASE("flattop shape") {
  const double tau = units::fs_to_au(100.0);
  const Pulse p({PulseKind::flattop, tau, units::fs_to_au(5.0), 0.0, Parity::even});
  CHECK(p.envelope(0.0) == 1.0);
  // half intensity at +-tau/2
  CHECK(p.envelope(0.5 * tau) * p.envelope(0.5 * tau) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.envelope(-0.5 * tau) * p.envelope(-0.5 * tau) == doctest::Approx(0.5).epsilon(1e-9));
  double prev = 1.0;
  for (double t = 0.0; t <= p.t1(); t += 5.0) {
    const double v = p.envelope(t);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(Pulse({PulseKind::flattop, units::fs_to_au(4.0), units::fs_to_au(10.0), 0.0, Parity::even}),
                  ConfigError);
}

TEST_CASE("rabi pair") {
  const RabiPair id = rabi_pair(0.0);
  CHECK(id.a == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(id.b) == 0.0);
  const RabiPair flip = rabi_pair(std::numbers::pi);
  CHECK(std::abs(flip.a) < 1e-15);
  CHECK(flip.b.imag() == doctest::Approx(-1.0));
  CHECK(rabi_pair(6.1 * std::numbers::pi).a.real() == doctest::Approx(-0.98769).epsilon(1e-4));
  for (double th = -20.0; th < 20.0; th += 0.37) {
    const RabiPair r = rabi_pair(th);
    CHECK(std::abs(std::norm(r.a) + std::norm(r.b) - 1.0) <= 1e-12);
  }
}

TEST_CASE("parity locked delay") {
  const double omega0 = default_config().physics.omega0;
  const double td = units::fs_to_au(110.0);
  const double even = parity_locked_delay(td, Parity::even, omega0);
  const double odd = parity_locked_delay(td, Parity::odd, omega0);
  const double n_even = 2.0 * omega0 * even / std::numbers::pi;
  const double n_odd = 2.0 * omega0 * odd / std::numbers::pi;
  CHECK(std::abs(n_even - std::round(n_even)) < 1e-9);
  CHECK(std::lround(n_even) % 2 == 0);
  CHECK(std::abs(n_odd - std::round(n_odd)) < 1e-9);
  CHECK(std::lround(n_odd) % 2 != 0);
  CHECK(std::abs(even - td) <= std::numbers::pi / omega0);
  // even and odd differ by half a carrier period in the full separation 2 t_delta
  CHECK(units::au_to_fs(2.0 * std::abs(even - odd)) * 1000.0 == doctest::Approx(50.7).epsilon(0.01));
}

TEST_CASE("custom envelope") {
  const Pulse p = Pulse::custom([](double) { return 1.0; }, 0.0, 500.0);
  CHECK(p.envelope(250.0) == 1.0);
  CHECK(p.envelope_integral(0.0, 500.0) == doctest::Approx(500.0));
  CHECK(p.envelope_squared_integral(100.0, 300.0) == doctest::Approx(200.0));
}

}  // TEST_SUITE
