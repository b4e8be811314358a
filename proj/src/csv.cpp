#include "homogenlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "homogenlab/error.hpp"

namespace homogenlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, std::string_view context) {
  token = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    reject("malformed_number", std::string(context) + ": cannot parse '" + std::string(token) + "' as a number");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

Vector parse_double_list(std::string_view text) {
  Vector out;
  for (std::string_view part : split_commas(text)) out.push_back(parse_double(part, "list"));
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::string_view part : split_commas(text)) {
    part = trim(part);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      reject("malformed_number", "list: cannot parse '" + std::string(part) + "' as a non-negative integer");
    }
    out.push_back(v);
  }
  return out;
}

Matrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    for (std::string_view part : split_commas(line)) row.push_back(parse_double(part, "line " + std::to_string(line_no)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      reject("dimension_mismatch", "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(rows.front().size()) + " values, got " +
                                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "empty_input", "matrix file has no rows");
  return Matrix::from_rows(rows);
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) reject("io_error", "cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_csv(buf.str());
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view command,
                     const std::vector<std::pair<std::string, std::string>>& params)
    : out_(out) {
  out_ << "# command=" << command;
  for (const auto& [k, v] : params) out_ << ' ' << k << '=' << v;
  out_ << '\n';
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  std::vector<std::string> fields;
  for (const auto& c : columns) fields.push_back(csv_field(c));
  write(fields);
}

void CsvWriter::write(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

}  // namespace homogenlab
