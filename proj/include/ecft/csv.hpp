#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace ecft {

/// Shortest decimal text that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

/// RFC 4180 field quoting: fields containing commas, quotes or line breaks
/// are wrapped in double quotes with embedded quotes doubled.
[[nodiscard]] std::string csv_field(std::string_view field);

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(std::initializer_list<std::string_view> fields);

  private:
    std::ostream& out_;
};

}  // namespace ecft
