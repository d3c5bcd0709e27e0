#include "geoharm/csv.hpp"

#include <istream>
#include <sstream>

#include "geoharm/errors.hpp"

namespace geoharm {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

CsvReader::CsvReader(std::istream& in, const std::vector<std::string>& expected_header)
    : in_(in), columns_(expected_header.size()), line_number_(1) {
  std::string header;
  if (!std::getline(in_, header)) throw parse_error("csv: missing header");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto fields = split_csv_line(header);
  if (fields != expected_header) {
    throw parse_error("csv: unexpected header '" + header + "'");
  }
}

bool CsvReader::next_row(std::vector<double>& row) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != columns_) {
      throw parse_error("csv line " + std::to_string(line_number_) +
                        ": expected " + std::to_string(columns_) + " fields");
    }
    row.clear();
    for (const std::string& f : fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        throw parse_error("csv line " + std::to_string(line_number_) +
                          ": non-numeric field '" + f + "'");
      }
      if (used != f.size()) {
        throw parse_error("csv line " + std::to_string(line_number_) +
                          ": non-numeric field '" + f + "'");
      }
      row.push_back(v);
    }
    return true;
  }
  return false;
}

}  // namespace geoharm
