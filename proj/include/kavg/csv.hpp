#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kavg {

/// Empty cell, integer, real, or text.
using CsvCell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string>;
using CsvRow = std::vector<CsvCell>;

struct CsvSchema {
  std::vector<std::string> columns;
};

namespace schema {
inline const CsvSchema kTrajectory{{"l", "t_l1", "s_l2", "m_ratio"}};
inline const CsvSchema kThetaSweep{{"n", "k", "theta", "steps", "mean_T", "stderr", "ci_lo", "ci_hi", "q05",
                                    "q25", "q50", "q75", "q95", "r"}};
inline const CsvSchema kCutoff{{"n", "k", "a", "steps", "mean_T", "stderr", "ref_2phi", "r", "flag"}};
inline const CsvSchema kMixingTime{{"n", "k", "epsilon", "median_hit", "q25", "q75", "censored_frac", "r"}};
inline const CsvSchema kPoisson{{"n", "k", "t", "r", "mean_N", "mean_S", "stderr_S", "predicted_S"}};
}  // namespace schema

/// Reals with 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// Header line, then one line per row; commas, LF endings, no quoting.
/// DomainError if a row's width differs from the schema.
void write_csv(std::ostream& os, std::span<const CsvRow> rows, const CsvSchema& schema);
/// IoError if the file cannot be written.
void write_csv(const std::filesystem::path& path, std::span<const CsvRow> rows, const CsvSchema& schema);

}  // namespace kavg
