#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qent/config.hpp"
#include "qent/experiments.hpp"
#include "qent/propagator.hpp"

namespace qent {

std::string_view code_version();

enum class OutputFormat { csv, json };

/// Throws ConfigError("format") for anything other than csv or json.
OutputFormat parse_format(std::string_view text);
std::string_view extension(OutputFormat format);

using Cell = std::variant<double, std::string>;

/// Column-named table in file units (fs, eV, bits). Numbers are written
/// with 12 significant digits; NaN marks an undefined value.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);  // throws DomainError on a width mismatch
  double number(std::size_t row, std::string_view column) const;
};

// Conversions from experiment results. Times in fs, energies in eV.
Table trace_table(const EntanglementTrace& trace);
Table populations_table(const EntanglementTrace& trace);
Table sweep_table(const std::vector<SweepRow>& rows);
Table triplet_table(const TripletResult& triplet);
/// One column per case, time and branch; `fluorescence` picks the photon axis.
Table spectra_table(const TwoPulseResult& result, bool fluorescence);
Table overlap_table(const TwoPulseResult& result);
Table oracle_table(const std::vector<OracleReport>& reports);

/// Header row plus one line per row; no metadata.
std::string format_csv(const Table& table);
std::string format_json(const Table& table, std::string_view config_hash = {});

/// Parses the output of format_csv (lines starting with '#' are skipped).
/// Cells that parse as numbers become numbers, "nan" becomes NaN.
Table parse_csv(std::string_view text);
Table parse_json(std::string_view text);

/// Writes `name`.csv (with a leading "# config_hash: ..." line) or
/// `name`.json into `dir`; returns the path. Throws std::runtime_error
/// when the file cannot be written.
std::filesystem::path write_table(const std::filesystem::path& dir, std::string_view name,
                                  const Table& table, OutputFormat format, std::string_view config_hash);

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RecordedValue {
  std::string name;
  double value = 0.0;
};

struct RunManifest {
  std::string command;
  RunConfig config;
  std::size_t workers = 1;
  double wall_time_s = 0.0;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<CriterionResult> criteria;
  std::vector<RecordedValue> values;
};

std::string format_manifest(const RunManifest& manifest);
std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

/// Reads the config hash stamped into a file written by write_table or
/// write_manifest; empty when there is none.
std::string read_config_hash(const std::filesystem::path& path);

}  // namespace qent
