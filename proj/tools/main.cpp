// qent command-line driver: runs one experiment (or all of them), writes the
// data files and a manifest into the output directory.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "checks.hpp"
#include "qent/errors.hpp"
#include "qent/io.hpp"
#include "qent/parallel.hpp"
#include "qent/units.hpp"

namespace {

using namespace qent;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_config = 2;
constexpr int exit_gate = 3;
constexpr int exit_usage = 64;

constexpr std::array<std::string_view, 6> subcommands = {"populations", "transfer",     "sweep",
                                                         "two-pulse",   "oracle-check", "all"};

constexpr double triplet_tau_fs = 200.0;

const char* usage_text =
    "usage: qent <subcommand> [--config PATH] [--out DIR] [--workers N] [--format csv|json]\n"
    "\n"
    "subcommands:\n"
    "  populations   branch populations over the duration scan and the decay\n"
    "  transfer      populations plus entropy and concurrence of every partition\n"
    "  sweep         peak mode entanglement versus pulse duration, flattop triplet\n"
    "  two-pulse     single / even / odd pulse spectra and overlaps\n"
    "  oracle-check  analytic amplitudes against direct propagation (64 x 64 grid)\n"
    "  all           everything above\n";

struct Options {
  std::string config = "default";
  std::filesystem::path out = "out";
  std::size_t workers = 0;
  std::string format = "csv";
};

struct Run {
  const RunConfig& config;
  const Options& opts;
  OutputFormat format;
  RunManifest manifest;
  cli::CheckSet checks;

  void write(std::string_view name, const Table& table) {
    const auto path = write_table(opts.out, name, table, format, config.hash());
    manifest.files.push_back(path.filename().string());
  }
};

void run_populations(Run& run, bool measures) {
  TraceOptions options;
  options.workers = run.opts.workers;
  options.with_measures = measures;
  const EntanglementTrace trace = run_transfer_trace(run.config, options);
  if (measures) run.write("transfer_trace", trace_table(trace));
  run.write("populations", populations_table(trace));
  run.checks.append(measures ? cli::check_transfer(run.config, trace) : cli::check_populations(run.config, trace));
}

void run_sweep(Run& run) {
  SweepOptions options;
  options.workers = run.opts.workers;
  const auto rows = run_duration_sweep(run.config, default_sweep_durations(), options);
  const TripletResult triplet = run_fluorescence_triplet(run.config, units::fs_to_au(triplet_tau_fs));
  run.write("sweep", sweep_table(rows));
  run.write("triplet", triplet_table(triplet));
  run.checks.append(cli::check_sweep(rows, triplet));
}

void run_two_pulse(Run& run) {
  const TwoPulseResult result = run_two_pulse_suite(run.config, run.opts.workers);
  run.write("spectra_electron", spectra_table(result, false));
  run.write("spectra_fluorescence", spectra_table(result, true));
  run.write("overlaps", overlap_table(result));
  run.checks.append(cli::check_two_pulse(run.config, result));
}

void run_oracle(Run& run) {
  const auto reports = run_oracle_check(run.config, 64, run.opts.workers);
  run.write("oracle", oracle_table(reports));
  const cli::CheckSet checks = cli::check_oracle(reports);
  for (const CriterionResult& g : checks.gates)
    std::cout << (g.pass ? "PASS " : "FAIL ") << g.name << ": " << g.detail << '\n';
  run.checks.append(checks);
}

int execute(const std::string& command, const Options& opts) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = load_config(opts.config);
  const OutputFormat format = parse_format(opts.format);
  std::filesystem::create_directories(opts.out);

  Run run{config, opts, format, {}, {}};
  run.manifest.command = command;
  run.manifest.config = config;
  run.manifest.workers = opts.workers == 0 ? default_workers() : opts.workers;

  const bool all = command == "all";
  if (command == "populations") run_populations(run, false);
  if (command == "transfer" || all) run_populations(run, true);
  if (command == "sweep" || all) run_sweep(run);
  if (command == "two-pulse" || all) run_two_pulse(run);
  if (command == "oracle-check" || all) run_oracle(run);

  run.manifest.criteria = run.checks.gates;
  run.manifest.criteria.insert(run.manifest.criteria.end(), run.checks.figures.begin(), run.checks.figures.end());
  run.manifest.values = run.checks.values;
  run.manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(opts.out, run.manifest);

  for (const CriterionResult& c : run.checks.figures)
    std::cout << (c.pass ? "pass " : "miss ") << c.name << ": " << c.detail << '\n';
  if (!run.checks.gates_pass()) {
    for (const CriterionResult& g : run.checks.gates)
      if (!g.pass) std::cerr << "validation gate failed: " << g.name << ": " << g.detail << '\n';
    return exit_gate;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::find(subcommands.begin(), subcommands.end(), std::string_view(argv[1])) == subcommands.end()) {
    if (argc >= 2) std::cerr << "unknown subcommand '" << argv[1] << "'\n";
    std::cerr << usage_text;
    return exit_usage;
  }
  const std::string command = argv[1];

  Options opts;
  CLI::App app{"qent " + command};
  app.add_option("--config", opts.config, "config file, or 'default'");
  app.add_option("--out", opts.out, "output directory");
  app.add_option("--workers", opts.workers, "worker threads (0: all hardware threads)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", opts.format, "csv or json");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << usage_text;
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n' << usage_text;
    return exit_usage;
  }

  try {
    return execute(command, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
}
