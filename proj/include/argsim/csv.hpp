// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace argsim {

/// RFC-4180 CSV: quoted fields may contain commas, doubled quotes and
/// newlines. CRLF and LF both accepted.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::vector<std::vector<std::string>> parse_csv_string(const std::string& text);

std::string csv_quote(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Header-indexed CSV file. Column lookup by name; missing columns are an
/// input error so schema drift fails loudly.
class CsvTable {
 public:
  static CsvTable read_file(const std::string& path);
  static CsvTable from_rows(std::vector<std::vector<std::string>> rows, const std::string& what);

  std::size_t col(const std::string& name) const;
  std::size_t n_rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::string& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::string what_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);

/// Fixed-notation formatting used in report CSVs (locale-independent).
std::string format_double(double v, int precision);
/// Shortest round-trip representation, used where a value is an input to a
/// later pipeline stage.
std::string format_double_exact(double v);

}  // namespace argsim
