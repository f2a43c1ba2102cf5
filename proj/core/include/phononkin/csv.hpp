#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace phononkin {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Minimal CSV emitter: header once, then numeric rows.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

private:
  std::ostream* out_;
  std::size_t columns_;
};

}  // namespace phononkin
