#pragma once

#include <string>
#include <vector>

namespace casimir {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column index by header name; throws when absent.
  std::size_t column(const std::string& name) const;
};

// Numeric CSV with a mandatory header row. Blank lines are skipped.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

// Headerless numeric matrix (whitespace or comma separated). All rows must
// have equal length.
std::vector<std::vector<double>> read_matrix(const std::string& path);

// Fixed scientific formatting so identical data always serializes to
// identical bytes.
std::string format_value(double v);

}  // namespace casimir
