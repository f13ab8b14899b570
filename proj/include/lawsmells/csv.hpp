#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lawsmells::csv {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// Writes one row. String cells are always quoted, numeric cells never.
class RowWriter {
 public:
  explicit RowWriter(std::ostream& out) : out_(out) {}
  RowWriter& text(std::string_view s);
  RowWriter& number(double v);
  RowWriter& integer(long long v);
  RowWriter& empty();
  void end();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines.
std::vector<std::vector<std::string>> read(std::istream& in);

}  // namespace lawsmells::csv
