#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fundnet {

/// Shortest decimal form that round-trips: parsing the result recovers the
/// exact same double, and re-serializing a parsed value reproduces the
/// exact same text. All CSV/JSON exports rely on this for byte-identical
/// round trips.
std::string format_double(double x);

double parse_double_field(const std::string& field, int line, int column);
std::int64_t parse_int_field(const std::string& field, int line, int column);

/// Strict comma-separated reader: UTF-8, header row required, fixed column
/// count, no quoting or escapes (the schemas forbid commas in fields).
class CsvReader {
 public:
  /// Validates that the first line equals the expected header exactly.
  CsvReader(std::istream& in, std::string source_name,
            const std::vector<std::string>& expected_header);

  /// Reads one record; returns false at end of input. Throws ParseError
  /// when the field count does not match the header.
  bool next(std::vector<std::string>& fields);

  int line() const { return line_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 1;
  size_t arity_ = 0;
};

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace fundnet
