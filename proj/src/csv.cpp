// SPDX-License-Identifier: Apache-2.0

#include "argsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "argsim/common.hpp"

namespace argsim {

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool row_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
          row_started = true;
        } else {
          field.push_back(c);  // stray quote inside unquoted field, keep it
        }
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;  // swallowed; LF terminates the row
      case '\n':
        if (row_started || field_started || !field.empty() || !row.empty()) {
          end_row();
        }
        break;
      default:
        field.push_back(c);
        field_started = true;
        row_started = true;
        break;
    }
  }
  if (in_quotes) throw Error("csv: unterminated quoted field at end of input");
  if (row_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<std::vector<std::string>> parse_csv_string(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

std::string csv_quote(const std::string& field) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(fields[i]);
  }
  out << '\n';
}

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open csv file: " + path);
  return from_rows(parse_csv(in), path);
}

CsvTable CsvTable::from_rows(std::vector<std::vector<std::string>> rows, const std::string& what) {
  if (rows.empty()) throw Error("csv " + what + ": missing header row");
  CsvTable t;
  t.what_ = what;
  t.header_ = std::move(rows.front());
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != t.header_.size()) {
      throw Error("csv " + what + ": row " + std::to_string(i + 2) + " has " +
                  std::to_string(rows[i].size()) + " fields, header has " +
                  std::to_string(t.header_.size()));
    }
  }
  t.rows_ = std::move(rows);
  return t;
}

std::size_t CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw Error("csv " + what_ + ": missing column '" + name + "'");
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) throw Error(what + ": not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& what) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) throw Error(what + ": not an integer: '" + s + "'");
  return v;
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string format_double_exact(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace argsim
