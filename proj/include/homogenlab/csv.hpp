#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "homogenlab/numerics.hpp"

namespace homogenlab {

/// Shortest text that round-trips: 17 significant digits, "nan"/"inf"/"-inf"
/// for non-finite values.
std::string format_double(double v);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view text);

/// Comma-separated doubles ("1,2.5,-3"). Rejects empty or malformed entries.
Vector parse_double_list(std::string_view text);
std::vector<std::size_t> parse_count_list(std::string_view text);

/// Numeric matrix from CSV text: one row per line, blank lines and lines
/// starting with '#' ignored.
Matrix parse_matrix_csv(std::string_view text);
Matrix load_matrix_csv(const std::string& path);

class CsvWriter {
 public:
  /// Writes "# command=<command> key=value ..." as the first line.
  CsvWriter(std::ostream& out, std::string_view command,
            const std::vector<std::pair<std::string, std::string>>& params);

  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);

  template <typename... Ts>
  void row(const Ts&... values) {
    std::vector<std::string> fields;
    (fields.push_back(to_field(values)), ...);
    write(fields);
  }

 private:
  template <typename T>
  static std::string to_field(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "1" : "0";
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_double(v);
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(v);
    } else {
      return csv_field(v);
    }
  }
  void write(const std::vector<std::string>& fields);

  std::ostream& out_;
};

}  // namespace homogenlab
