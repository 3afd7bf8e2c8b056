#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "qent/config.hpp"
#include "qent/errors.hpp"
#include "qent/units.hpp"

using namespace qent;

TEST_SUITE("core_units") {

TEST_CASE("energy and time conversions") {
  CHECK(units::ev_to_au(27.211386) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(units::ev_to_au(40.8) == doctest::Approx(1.49937).epsilon(1e-5));
  CHECK(units::ev_to_au(0.0) == 0.0);
  CHECK(units::au_to_fs(1.0) * 1000.0 == doctest::Approx(24.189).epsilon(1e-4));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng);
    CHECK(std::abs(units::ev_to_au(units::au_to_ev(x)) - x) <= 1e-14 * std::abs(x));
    CHECK(std::abs(units::fs_to_au(units::au_to_fs(x)) - x) <= 1e-14 * std::abs(x));
  }
}

TEST_CASE("intensity to field") {
  CHECK(units::intensity_to_field(3.50945e16) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(units::intensity_to_field(1.25e13) == doctest::Approx(0.018871).epsilon(1e-4));
  CHECK(units::intensity_to_field(0.0) == 0.0);
  CHECK_THROWS_AS(units::intensity_to_field(-1.0), ConfigError);
}

TEST_CASE("default helium constants") {
  const PhysicalConfig p = default_config().physics;
  const double c = units::speed_of_light;
  CHECK(p.kappa == doctest::Approx(4.0 * p.z_ba * p.z_ba * std::pow(p.omega0, 3) / (c * c * c)).epsilon(1e-12));
  CHECK(p.kappa == doctest::Approx(2.0 * std::numbers::pi * p.v_sp * p.v_sp).epsilon(1e-12));
  CHECK(p.eps_b - p.eps_a == doctest::Approx(p.omega0).epsilon(1e-14));

  const double omega0_ev = units::au_to_ev(p.rabi_frequency());
  CHECK(omega0_ev >= 0.19);
  CHECK(omega0_ev <= 0.20);
  const double tr_fs = units::au_to_fs(p.rabi_period());
  CHECK(tr_fs >= 21.0);
  CHECK(tr_fs <= 22.0);
  const double lifetime_ps = units::au_to_fs(1.0 / p.kappa) / 1000.0;
  CHECK(lifetime_ps >= 30.0);
  CHECK(lifetime_ps <= 36.0);
}

TEST_CASE("energy grid") {
  const EnergyGrid g(-1.0, 1.0, 5);
  CHECK(g.step() == 0.5);
  CHECK(g[0] == -1.0);
  CHECK(g[4] == 1.0);
  CHECK(g.max_abs() == 1.0);
  const auto w = g.trapezoid_weights();
  CHECK(w.front() == 0.25);
  CHECK(w[2] == 0.5);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(2.0));
  CHECK(g.nearest_index(0.2) == 2);
  CHECK(g.nearest_index(-7.0) == 0);
  CHECK_THROWS(EnergyGrid(1.0, -1.0, 5));
  CHECK_THROWS(EnergyGrid(-1.0, 1.0, 1));
}

TEST_CASE("step rule and time grid") {
  const double tr = 900.0;
  CHECK(max_pulse_step(tr, 0.0) == doctest::Approx(4.5));
  CHECK(max_pulse_step(tr, 1.0) == doctest::Approx(2.0 * std::numbers::pi / 40.0));

  const TimeGrid g = TimeGrid::make(-100.0, 100.0, 1e6, 3.0, 60);
  CHECK(g.step() <= 3.0);
  CHECK(g.node(0) == -100.0);
  CHECK(g.node(g.n_pulse - 1) == doctest::Approx(100.0));
  REQUIRE(g.checkpoints.size() == 60);
  CHECK(g.checkpoints.front() > 100.0);
  CHECK(g.checkpoints.back() == 1e6);
  for (std::size_t i = 1; i < g.checkpoints.size(); ++i) CHECK(g.checkpoints[i] > g.checkpoints[i - 1]);
  // geometric spacing: constant ratio
  const double r0 = g.checkpoints[1] / g.checkpoints[0];
  CHECK(g.checkpoints[30] / g.checkpoints[29] == doctest::Approx(r0).epsilon(1e-10));
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("empty text gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(units::au_to_ev(c.physics.omega0) == doctest::Approx(40.8));
  CHECK(c.physics.intensity == 1.25e13);
  CHECK(c.physics.z_ag == 0.4537);
  CHECK(c.physics.z_ba == 0.37247);
  CHECK(units::au_to_fs(c.pulse.tau) == doctest::Approx(44.0));
  CHECK(c.pulse.kind == PulseKind::gaussian);
  CHECK(c.electron_grid.size() == 481);
  CHECK(c.photon_grid.size() == 481);
  CHECK(units::au_to_ev(c.electron_grid.min()) == doctest::Approx(-0.6));
  CHECK(c.tf == doctest::Approx(10.0 / c.physics.kappa));
  CHECK(c.n_checkpoints == 60);
  CHECK(load_config("default").hash() == c.hash());
}

TEST_CASE("overrides change only the named key") {
  const RunConfig base = default_config();
  const RunConfig c = parse_config("# longer pulse\ntau_fs = 200   # fs\n");
  CHECK(units::au_to_fs(c.pulse.tau) == doctest::Approx(200.0));
  CHECK(c.physics.kappa == base.physics.kappa);
  CHECK(c.electron_grid == base.electron_grid);
  CHECK(c.pulse.kind == base.pulse.kind);
}

TEST_CASE("errors name the key") {
  auto key_of = [](std::string_view text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("omega0_ev = -1") == "omega0_ev");
  CHECK(key_of("colour = blue") == "colour");
  CHECK(key_of("tau_fs = fast") == "tau_fs");
  CHECK(key_of("tau_fs = 10\ntau_fs = 20") == "tau_fs");
  CHECK(key_of("n_eps =") == "n_eps");
  CHECK(key_of("n_eps = 2.5") == "n_eps");
  CHECK(key_of("pulse_shape = square") == "pulse_shape");
  CHECK(key_of("parity = both") == "parity");
  CHECK(key_of("eps_min_ev = 1\neps_max_ev = 0.5") == "eps_max_ev");
  CHECK(key_of("tf_s = 1e-15") == "tf_s");
  CHECK(key_of("intensity_wcm2 = 0") == "intensity_wcm2");
}

TEST_CASE("missing file reports the path") {
  try {
    load_config("/nonexistent/dir/run.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/run.cfg") != std::string::npos);
  }
}

TEST_CASE("canonical text round trip") {
  const RunConfig c = parse_config("pulse_shape = flattop\ntau_fs = 123.5\nn_eps = 101\ntf_s = 2e-11");
  const RunConfig again = parse_config(c.canonical_text());
  CHECK(again.canonical_text() == c.canonical_text());
  CHECK(again.hash() == c.hash());
}

TEST_CASE("hash changes iff a key changes") {
  const RunConfig base = default_config();
  const std::vector<std::pair<std::string, std::string>> edits = {
      {"omega0_ev", "40.9"},     {"intensity_wcm2", "2e13"}, {"z_ag", "0.5"},         {"z_ba", "0.38"},
      {"tau_fs", "45"},          {"pulse_shape", "flattop"}, {"parity", "odd"},       {"t_delta_fs", "100"},
      {"ramp_fs", "4"},          {"eps_min_ev", "-0.5"},     {"eps_max_ev", "0.5"},   {"n_eps", "401"},
      {"epsl_min_ev", "-0.5"},   {"epsl_max_ev", "0.5"},     {"n_epsl", "401"},       {"tf_s", "1e-10"},
      {"n_time", "30"}};
  CHECK(edits.size() == config_keys().size());
  std::set<std::string> hashes{base.hash()};
  for (const auto& [key, value] : edits) {
    const RunConfig changed = parse_config(key + " = " + value);
    CHECK_MESSAGE(changed.hash() != base.hash(), key);
    hashes.insert(changed.hash());
  }
  CHECK(hashes.size() == edits.size() + 1);
  CHECK(parse_config("tau_fs = 44.0").hash() == base.hash());
  CHECK(parse_config("n_eps = 481\nparity = even").hash() == base.hash());
}

}  // TEST_SUITE
