#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace typlab {

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string format_number(double x);

/// Comma-separated, '.' decimal, LF line endings, no quoting. Cells must not
/// contain commas or newlines.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((write_cell(cells, first)), ...);
    out_ << '\n';
  }

  void row(const std::vector<double>& cells);

 private:
  void write_cell(double x, bool& first);
  void write_cell(std::string_view s, bool& first);
  void write_cell(const std::string& s, bool& first) { write_cell(std::string_view(s), first); }
  void write_cell(const char* s, bool& first) { write_cell(std::string_view(s), first); }
  template <class I>
    requires std::is_integral_v<I>
  void write_cell(I v, bool& first) { write_cell(std::string_view(std::to_string(v)), first); }

  std::ostream& out_;
};

}  // namespace typlab
