#include "fundnet/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "fundnet/errors.hpp"

namespace fundnet {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& field, int line, int column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError("expected a number, got '" + field + "'", line, column);
  return value;
}

std::int64_t parse_int_field(const std::string& field, int line, int column) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError("expected an integer, got '" + field + "'", line, column);
  return value;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

CsvReader::CsvReader(std::istream& in, std::string source_name,
                     const std::vector<std::string>& expected_header)
    : in_(in), source_(std::move(source_name)) {
  std::string header_line;
  if (!std::getline(in_, header_line))
    throw ParseError(source_ + ": missing header row", 1, 1);
  if (!header_line.empty() && header_line.back() == '\r')
    header_line.pop_back();
  const std::vector<std::string> header = split_line(header_line);
  if (header != expected_header) {
    std::string expected;
    for (size_t i = 0; i < expected_header.size(); ++i)
      expected += (i ? "," : "") + expected_header[i];
    throw ParseError(
        source_ + ": header '" + header_line + "' does not match '" +
            expected + "'",
        1, 1);
  }
  arity_ = expected_header.size();
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  if (!std::getline(in_, line)) return false;
  ++line_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  fields = split_line(line);
  if (fields.size() != arity_)
    throw ParseError(source_ + ": expected " + std::to_string(arity_) +
                         " fields, got " + std::to_string(fields.size()),
                     line_, static_cast<int>(fields.size()));
  return true;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace fundnet
