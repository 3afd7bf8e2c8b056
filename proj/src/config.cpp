#include "qent/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "qent/errors.hpp"
#include "qent/format.hpp"

namespace qent {

namespace {

constexpr double default_omega0_ev = 40.8;
constexpr double default_intensity = 1.25e13;
constexpr double default_z_ag = 0.4537;
constexpr double default_z_ba = 0.37247;
constexpr double default_tau_fs = 44.0;
constexpr double default_t_delta_fs = 110.0;  // 2.5 tau: non-overlapping sub-pulses
constexpr double default_ramp_fs = 5.0;
constexpr double default_grid_ev = 0.6;
constexpr std::size_t default_grid_n = 481;
constexpr std::size_t default_checkpoints = 60;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  double x = 0.0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  if (!value.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc{} || ptr != last || !std::isfinite(x))
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
  return x;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  const double x = parse_double(key, value);
  if (x < 1.0 || x != std::floor(x) || x > 1e7)
    throw ConfigError(std::string(key), "expected a positive integer");
  return static_cast<std::size_t>(x);
}

PulseKind parse_shape(std::string_view value) {
  if (value == "gaussian") return PulseKind::gaussian;
  if (value == "flattop") return PulseKind::flattop;
  if (value == "double_gaussian") return PulseKind::double_gaussian;
  throw ConfigError("pulse_shape", "expected gaussian, flattop or double_gaussian");
}

Parity parse_parity(std::string_view value) {
  if (value == "even") return Parity::even;
  if (value == "odd") return Parity::odd;
  throw ConfigError("parity", "expected even or odd");
}

EnergyGrid make_grid(std::string_view prefix, double min_ev, double max_ev, std::size_t n) {
  if (!(max_ev > min_ev)) throw ConfigError(std::string(prefix) + "_max_ev", "max must exceed min");
  if (n < 2) throw ConfigError(prefix == "eps" ? "n_eps" : "n_epsl", "need at least two points");
  return EnergyGrid(units::ev_to_au(min_ev), units::ev_to_au(max_ev), n);
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "omega0_ev", "intensity_wcm2", "z_ag",        "z_ba",        "tau_fs", "pulse_shape",
      "parity",    "t_delta_fs",     "ramp_fs",     "eps_min_ev",  "eps_max_ev",
      "n_eps",     "epsl_min_ev",    "epsl_max_ev", "n_epsl",      "tf_s",   "n_time"};
  return keys;
}

double RunConfig::max_step() const {
  const double emax = std::max(electron_grid.max_abs(), photon_grid.max_abs());
  return max_pulse_step(physics.rabi_period(), emax);
}

TimeGrid RunConfig::time_grid(const Pulse& pulse) const {
  return TimeGrid::make(pulse.t0(), pulse.t1(), std::max(tf, pulse.t1()), max_step(),
                        n_checkpoints);
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  put("omega0_ev", format_number(units::au_to_ev(physics.omega0)));
  put("intensity_wcm2", format_number(physics.intensity));
  put("z_ag", format_number(physics.z_ag));
  put("z_ba", format_number(physics.z_ba));
  put("tau_fs", format_number(units::au_to_fs(pulse.tau)));
  put("pulse_shape", std::string(to_string(pulse.kind)));
  put("parity", std::string(to_string(pulse.parity)));
  put("t_delta_fs", format_number(units::au_to_fs(pulse.t_delta)));
  put("ramp_fs", format_number(units::au_to_fs(pulse.ramp)));
  put("eps_min_ev", format_number(units::au_to_ev(electron_grid.min())));
  put("eps_max_ev", format_number(units::au_to_ev(electron_grid.max())));
  put("n_eps", std::to_string(electron_grid.size()));
  put("epsl_min_ev", format_number(units::au_to_ev(photon_grid.min())));
  put("epsl_max_ev", format_number(units::au_to_ev(photon_grid.max())));
  put("n_epsl", std::to_string(photon_grid.size()));
  put("tf_s", format_number(units::au_to_s(tf)));
  put("n_time", std::to_string(n_checkpoints));
  return out.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig default_config() { return parse_config(""); }

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    bool known = false;
    for (auto k : config_keys()) known = known || k == key;
    if (!known) throw ConfigError(std::string(key), "unknown key");
    if (value.empty()) throw ConfigError(std::string(key), "missing value");
    if (!values.emplace(std::string(key), std::string(value)).second)
      throw ConfigError(std::string(key), "duplicate key");
  }

  auto number = [&](std::string_view key, double fallback) {
    const auto it = values.find(key);
    return it == values.end() ? fallback : parse_double(key, it->second);
  };
  auto count = [&](std::string_view key, std::size_t fallback) {
    const auto it = values.find(key);
    return it == values.end() ? fallback : parse_count(key, it->second);
  };
  auto text_value = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };

  RunConfig cfg;
  const double omega0_ev = number("omega0_ev", default_omega0_ev);
  if (!(omega0_ev > 0.0)) throw ConfigError("omega0_ev", "photon energy must be positive");
  const double intensity = number("intensity_wcm2", default_intensity);
  if (!(intensity > 0.0)) throw ConfigError("intensity_wcm2", "intensity must be positive");
  const double z_ag = number("z_ag", default_z_ag);
  if (z_ag < 0.0) throw ConfigError("z_ag", "dipole must be non-negative");
  const double z_ba = number("z_ba", default_z_ba);
  if (!(z_ba > 0.0)) throw ConfigError("z_ba", "dipole must be positive");
  cfg.physics = PhysicalConfig::from_dipoles(units::ev_to_au(omega0_ev), intensity, z_ag, z_ba);
  cfg.physics.validate();

  const double tau_fs = number("tau_fs", default_tau_fs);
  if (!(tau_fs > 0.0)) throw ConfigError("tau_fs", "pulse duration must be positive");
  const double t_delta_fs = number("t_delta_fs", default_t_delta_fs);
  if (t_delta_fs < 0.0) throw ConfigError("t_delta_fs", "pulse separation must be non-negative");
  const double ramp_fs = number("ramp_fs", default_ramp_fs);
  if (ramp_fs < 0.0) throw ConfigError("ramp_fs", "ramp must be non-negative");
  cfg.pulse.kind = parse_shape(text_value("pulse_shape").value_or("gaussian"));
  cfg.pulse.parity = parse_parity(text_value("parity").value_or("even"));
  cfg.pulse.tau = units::fs_to_au(tau_fs);
  cfg.pulse.t_delta = units::fs_to_au(t_delta_fs);
  cfg.pulse.ramp = units::fs_to_au(ramp_fs);

  cfg.electron_grid = make_grid("eps", number("eps_min_ev", -default_grid_ev),
                                number("eps_max_ev", default_grid_ev), count("n_eps", default_grid_n));
  cfg.photon_grid = make_grid("epsl", number("epsl_min_ev", -default_grid_ev),
                              number("epsl_max_ev", default_grid_ev), count("n_epsl", default_grid_n));

  const Pulse pulse(cfg.pulse);  // validates shape parameters
  if (values.contains("tf_s")) {
    const double tf_s = number("tf_s", 0.0);
    cfg.tf = units::s_to_au(tf_s);
    if (!(cfg.tf > pulse.t1())) throw ConfigError("tf_s", "final time must lie after the pulse");
  } else {
    cfg.tf = 10.0 / cfg.physics.kappa;
  }
  cfg.n_checkpoints = count("n_time", default_checkpoints);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (path == "default") return default_config();
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qent
