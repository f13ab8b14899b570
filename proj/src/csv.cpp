#include "lawsmells/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace lawsmells::csv {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void RowWriter::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

RowWriter& RowWriter::text(std::string_view s) {
  sep();
  out_ << '"';
  for (char c : s) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

RowWriter& RowWriter::number(double v) {
  sep();
  out_ << format_number(v);
  return *this;
}

RowWriter& RowWriter::integer(long long v) {
  sep();
  out_ << v;
  return *this;
}

RowWriter& RowWriter::empty() {
  sep();
  return *this;
}

void RowWriter::end() {
  out_ << '\n';
  first_ = true;
}

std::vector<std::vector<std::string>> read(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lawsmells::csv
