#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qent/pulse.hpp"
#include "qent/units.hpp"

namespace qent {

/// Everything a run needs: physics, pulse, grids and the final time.
/// Values are stored in atomic units; the text form uses eV / fs / s.
struct RunConfig {
  PhysicalConfig physics;
  PulseSpec pulse;
  EnergyGrid electron_grid;
  EnergyGrid photon_grid;
  double tf = 0.0;                 // final propagation time
  std::size_t n_checkpoints = 60;  // post-pulse checkpoints, log-spaced to tf

  /// Time grid for `pulse` under the default step rule.
  TimeGrid time_grid(const Pulse& pulse) const;
  double max_step() const;

  /// Canonical `key = value` text (all keys, fixed order, 12 significant digits).
  std::string canonical_text() const;
  /// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
  std::string hash() const;
};

/// Recognised keys, in canonical order.
const std::vector<std::string_view>& config_keys();

/// The built-in helium configuration.
RunConfig default_config();

/// Parses `key = value` lines; '#' starts a comment. Omitted keys take their
/// defaults. Throws ConfigError naming the key on unknown keys, non-numeric
/// values, duplicates or violated invariants.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; the literal path "default" yields the defaults.
/// Throws ConfigError (with the path in the message) when unreadable.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace qent
