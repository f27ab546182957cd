#pragma once

#include <string>
#include <variant>
#include <vector>

namespace stvac::cli {

using Cell = std::variant<double, long long, std::string>;

// Comma-separated table with a header row. Doubles are written with 17
// significant digits, or as hexadecimal literals when `hex` is set.
class Csv {
 public:
  Csv(std::vector<std::string> columns, bool hex) : columns_(std::move(columns)), hex_(hex) {}
  void row(std::vector<Cell> cells);
  std::string str() const;
  void save(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  bool hex_;
};

std::string format_double(double v, bool hex);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// standalone SVG line chart; non-positive values are skipped on a log axis
std::string svg_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel, const std::vector<Series>& series,
                      bool log_y);
void save_text(const std::string& path, const std::string& text);

// two columns (l, a_l) per line, '#' comments; missing degrees are zero.
// Throws InputError "<path>:<line>: ..." on malformed lines.
std::vector<double> read_coefficients(const std::string& path);
std::vector<double> parse_coefficients(const std::string& text, const std::string& path = "<coefficients>");

}  // namespace stvac::cli
