#include "typlab/csv.hpp"

#include <charconv>
#include <cmath>

namespace typlab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_number(cells[i]);
  out_ << '\n';
}

void CsvWriter::write_cell(double x, bool& first) { write_cell(std::string_view(format_number(x)), first); }

void CsvWriter::write_cell(std::string_view s, bool& first) {
  if (!first) out_ << ',';
  out_ << s;
  first = false;
}

}  // namespace typlab
