#pragma once

#include <vector>

#include "qent/io.hpp"

namespace qent::cli {

/// Checks evaluated by one subcommand. Gates decide the exit status; the
/// figure checks are recorded in the manifest only.
struct CheckSet {
  std::vector<CriterionResult> gates;
  std::vector<CriterionResult> figures;
  std::vector<RecordedValue> values;

  void append(const CheckSet& other);
  bool gates_pass() const;
};

CheckSet check_populations(const RunConfig& config, const EntanglementTrace& trace);
CheckSet check_transfer(const RunConfig& config, const EntanglementTrace& trace);
CheckSet check_sweep(const std::vector<SweepRow>& rows, const TripletResult& triplet);
CheckSet check_two_pulse(const RunConfig& config, const TwoPulseResult& result);
CheckSet check_oracle(const std::vector<OracleReport>& reports);

}  // namespace qent::cli
