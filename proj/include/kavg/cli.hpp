#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kavg/csv.hpp"
#include "kavg/experiments.hpp"
#include "kavg/metrics.hpp"

namespace kavg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kScaleError = 3,
  kInternalError = 4,
  kIoError = 5,
  kVerificationFailed = 6,
};

/// Entry point behind the `kavg` executable. `args` excludes the program
/// name. Subcommands: simulate, verify-prop1, theta-sweep, mixing-time,
/// cutoff, poisson.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Row builders for each CSV schema.
std::vector<CsvRow> trajectory_rows(std::span<const MetricsSample> samples);
std::vector<CsvRow> theta_rows(std::span<const ThetaRow> rows);
std::vector<CsvRow> cutoff_rows(std::span<const CutoffRow> rows);
std::vector<CsvRow> mixing_rows(std::span<const MixingRow> rows);
std::vector<CsvRow> poisson_rows(std::span<const PoissonRow> rows);

}  // namespace kavg::cli
