#include "qent/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qent/errors.hpp"
#include "qent/format.hpp"
#include "qent/units.hpp"

#ifndef QENT_VERSION
#define QENT_VERSION "unknown"
#endif

namespace qent {

namespace {

using nlohmann::json;

double fs(double au) { return units::au_to_fs(au); }
double ev(double au) { return units::au_to_ev(au); }

// Rounds to the 12 significant digits written to files, so CSV and JSON carry
// the same values.
double rounded(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string csv_cell(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) return format_number(*x);
  return std::get<std::string>(c);
}

json json_cell(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) {
    if (std::isnan(*x)) return nullptr;
    return rounded(*x);
  }
  return std::get<std::string>(c);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    line.remove_prefix(pos + 1);
  }
}

Cell parse_cell(std::string_view s) {
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return x;
  return std::string(s);
}

void add_population_cells(std::vector<Cell>& row, const Populations& p) {
  row.insert(row.end(), {p.g, p.alpha, p.beta, p.gamma, p.delta, p.sum()});
}

const std::vector<std::string> population_columns = {"P_g", "P_alpha", "P_beta", "P_gamma", "P_delta", "P_sum"};

json grid_json(const EnergyGrid& g) {
  return {{"min_eV", rounded(ev(g.min()))},
          {"max_eV", rounded(ev(g.max()))},
          {"n", g.size()},
          {"step_eV", rounded(ev(g.step()))}};
}

}  // namespace

std::string_view code_version() { return QENT_VERSION; }

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("format", "expected csv or json, got '" + std::string(text) + "'");
}

std::string_view extension(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw DomainError("table row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

double Table::number(std::size_t row, std::string_view column) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != column) continue;
    if (const double* x = std::get_if<double>(&rows.at(row)[c])) return *x;
    throw DomainError("column '" + std::string(column) + "' is not numeric");
  }
  throw DomainError("no column '" + std::string(column) + "'");
}

Table trace_table(const EntanglementTrace& trace) {
  Table t;
  t.columns = {"segment", "t_fs", "tau_fs", "t_after_pulse_fs"};
  t.columns.insert(t.columns.end(), population_columns.begin(), population_columns.end());
  for (Partition p : all_partitions) {
    const std::string tag(to_string(p));
    t.columns.push_back("S_vN_" + tag + "_bits");
    t.columns.push_back("C_" + tag);
  }
  for (const TracePoint& p : trace.points) {
    std::vector<Cell> row = {double(p.segment), fs(p.time_axis), fs(p.tau), fs(p.after_pulse)};
    add_population_cells(row, p.pops);
    for (const PartitionMeasures& m : p.measures) {
      row.push_back(m.entropy);
      row.push_back(m.concurrence);
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table populations_table(const EntanglementTrace& trace) {
  Table t;
  t.columns = {"segment", "t_fs", "tau_fs", "t_after_pulse_fs"};
  t.columns.insert(t.columns.end(), population_columns.begin(), population_columns.end());
  for (const TracePoint& p : trace.points) {
    std::vector<Cell> row = {double(p.segment), fs(p.time_axis), fs(p.tau), fs(p.after_pulse)};
    add_population_cells(row, p.pops);
    t.add_row(std::move(row));
  }
  return t;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t;
  t.columns = {"shape", "tau_fs", "S_vN_modes_max_bits", "C_modes_max", "t_max_after_pulse_fs", "P_g_survival"};
  for (const SweepRow& r : rows)
    t.add_row({std::string(to_string(r.shape)), fs(r.tau), r.entropy_max, r.concurrence_max, fs(r.time_of_max),
               r.ground_survival});
  return t;
}

Table triplet_table(const TripletResult& triplet) {
  Table t;
  t.columns = {"eps_l_eV", "rho_gamma_per_eV"};
  const double per_ev = 1.0 / units::hartree_ev;
  for (std::size_t i = 0; i < triplet.curve.values.size(); ++i)
    t.add_row({ev(triplet.curve.axis[i]), triplet.curve.values[i] * per_ev});
  return t;
}

Table spectra_table(const TwoPulseResult& result, bool fluorescence) {
  Table t;
  if (result.cases.empty()) return t;
  const auto curves = [&](const CaseSpectra& c, bool final_time) -> const std::vector<SpectrumCurve>& {
    if (fluorescence) return final_time ? c.fluor_tf : c.fluor_t1;
    return final_time ? c.electron_tf : c.electron_t1;
  };
  const EnergyGrid& axis = curves(result.cases.front(), false).front().axis;
  t.columns = {fluorescence ? "eps_l_eV" : "eps_eV"};
  std::vector<const SpectrumCurve*> all;
  for (const CaseSpectra& c : result.cases)
    for (bool final_time : {false, true})
      for (const SpectrumCurve& s : curves(c, final_time)) {
        t.columns.push_back(c.name + (final_time ? "_tf_" : "_t1_") + std::string(to_string(s.branch)) +
                            "_per_eV");
        all.push_back(&s);
      }
  const double per_ev = 1.0 / units::hartree_ev;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    std::vector<Cell> row = {ev(axis[i])};
    for (const SpectrumCurve* s : all) row.push_back(s->values[i] * per_ev);
    t.add_row(std::move(row));
  }
  return t;
}

Table overlap_table(const TwoPulseResult& result) {
  Table t;
  t.columns = {"case", "t_delta_fs", "t1_fs", "tf_fs", "overlap_alpha_beta_t1", "overlap_alpha_gamma_bar_tf",
               "P_g_survival"};
  for (const CaseSpectra& c : result.cases)
    t.add_row({c.name, fs(c.pulse.t_delta), fs(c.t1), fs(c.tf), c.overlap_alpha_beta_t1, c.overlap_alpha_gamma_tf,
               c.ground_survival});
  return t;
}

Table oracle_table(const std::vector<OracleReport>& reports) {
  Table t;
  t.columns = {"t_fs", "amplitude", "max_rel", "l2_rel", "tolerance", "pass"};
  for (const OracleReport& r : reports)
    for (const AmplitudeDeviation& d : r.rows)
      t.add_row({fs(r.time), d.name, d.max_rel, d.l2_rel, r.tolerance, d.l2_rel < r.tolerance ? 1.0 : 0.0});
  return t;
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const Table& table, std::string_view config_hash) {
  json doc;
  if (!config_hash.empty()) doc["config_hash"] = config_hash;
  doc["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + '\n';
}

Table parse_csv(std::string_view text) {
  Table t;
  bool header = true;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (header) {
      for (auto c : cells) t.columns.emplace_back(c);
      header = false;
      continue;
    }
    std::vector<Cell> row;
    for (auto c : cells) row.push_back(parse_cell(c));
    t.add_row(std::move(row));
  }
  return t;
}

Table parse_json(std::string_view text) {
  const json doc = json::parse(text);
  Table t;
  t.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const json& r : doc.at("rows")) {
    std::vector<Cell> row;
    for (const json& c : r) {
      if (c.is_null()) row.push_back(std::numeric_limits<double>::quiet_NaN());
      else if (c.is_number()) row.push_back(c.get<double>());
      else row.push_back(c.get<std::string>());
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::filesystem::path write_table(const std::filesystem::path& dir, std::string_view name, const Table& table,
                                  OutputFormat format, std::string_view config_hash) {
  const auto path = dir / (std::string(name) + "." + std::string(extension(format)));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  if (format == OutputFormat::csv) {
    out << "# config_hash: " << config_hash << '\n' << format_csv(table);
  } else {
    out << format_json(table, config_hash);
  }
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
  return path;
}

std::string format_manifest(const RunManifest& m) {
  json config = json::object();
  std::istringstream lines(m.config.canonical_text());
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    config[line.substr(0, eq)] = line.substr(eq + 3);
  }

  const Pulse pulse(m.config.pulse);
  const TimeGrid grid = m.config.time_grid(pulse);
  json doc;
  doc["command"] = m.command;
  doc["code_version"] = code_version();
  doc["config_hash"] = m.config.hash();
  doc["config"] = std::move(config);
  doc["grids"] = {{"electron", grid_json(m.config.electron_grid)},
                  {"photon", grid_json(m.config.photon_grid)},
                  {"time",
                   {{"t0_fs", rounded(fs(grid.t0))},
                    {"t1_fs", rounded(fs(grid.t1))},
                    {"tf_fs", rounded(fs(grid.tf))},
                    {"pulse_nodes", grid.n_pulse},
                    {"pulse_step_as", rounded(1000.0 * fs(grid.step()))},
                    {"checkpoints", grid.checkpoints.size()}}}};
  doc["workers"] = m.workers;
  doc["wall_time_s"] = rounded(m.wall_time_s);
  doc["files"] = m.files;
  json criteria = json::array();
  for (const CriterionResult& c : m.criteria)
    criteria.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  doc["criteria"] = std::move(criteria);
  json values = json::object();
  for (const RecordedValue& v : m.values) values[v.name] = std::isfinite(v.value) ? json(rounded(v.value)) : json();
  doc["values"] = std::move(values);
  return doc.dump(1) + '\n';
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_manifest(manifest);
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
  return path;
}

std::string read_config_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  constexpr std::string_view tag = "# config_hash: ";
  if (text.starts_with(tag)) return text.substr(tag.size(), text.find('\n') - tag.size());
  if (path.extension() == ".json") {
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_object() && doc.contains("config_hash") && doc["config_hash"].is_string())
      return doc["config_hash"].get<std::string>();
  }
  return {};
}

}  // namespace qent
