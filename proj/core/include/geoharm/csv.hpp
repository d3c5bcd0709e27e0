#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geoharm {

std::vector<std::string> split_csv_line(const std::string& line);

/// Minimal CSV reader for the library's own numeric table formats.
/// Verifies the header matches `expected_header` exactly (throws parse_error
/// otherwise) and yields rows of doubles.
class CsvReader {
 public:
  CsvReader(std::istream& in, const std::vector<std::string>& expected_header);

  /// Fills `row` with the next data row; returns false at end of input.
  /// Throws parse_error on a column-count mismatch or non-numeric field.
  bool next_row(std::vector<double>& row);

  std::size_t columns() const { return columns_; }

 private:
  std::istream& in_;
  std::size_t columns_;
  std::size_t line_number_;
};

}  // namespace geoharm
