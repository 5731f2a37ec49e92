#include "kavg/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "kavg/errors.hpp"

namespace kavg {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct CellFormatter {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(std::uint64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_real(v); }
  std::string operator()(const std::string& v) const {
    if (v.find_first_of(",\n\r\"") != std::string::npos) throw DomainError("CSV text cell needs quoting: " + v);
    return v;
  }
};

void write_line(std::ostream& os, std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, std::span<const CsvRow> rows, const CsvSchema& schema) {
  write_line(os, schema.columns);
  std::vector<std::string> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.columns.size()) {
      throw DomainError("CSV row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " cells, schema has " + std::to_string(schema.columns.size()));
    }
    cells.clear();
    for (const auto& cell : rows[r]) cells.push_back(std::visit(CellFormatter{}, cell));
    write_line(os, cells);
  }
}

void write_csv(const std::filesystem::path& path, std::span<const CsvRow> rows, const CsvSchema& schema) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out, rows, schema);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace kavg
