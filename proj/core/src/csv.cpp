#include "phononkin/csv.hpp"

#include "phononkin/errors.hpp"

#include <array>
#include <charconv>

namespace phononkin {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(&out), columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    *out_ << (first ? "" : ",") << h;
    first = false;
  }
  *out_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(&out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    *out_ << (i ? "," : "") << header[i];
  }
  *out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw Error("csv row width does not match header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    *out_ << (i ? "," : "") << format_double(values[i]);
  }
  *out_ << '\n';
}

}  // namespace phononkin
