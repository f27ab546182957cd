#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "stvac/error.hpp"
#include "stvac/io.hpp"

namespace stvac::cli {

std::string format_double(double v, bool hex) {
  if (hex) return stvac::hex(v);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Csv::row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) throw Error("csv: row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

std::string Csv::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&r[i]))
        os << format_double(*d, hex_);
      else if (const long long* n = std::get_if<long long>(&r[i]))
        os << *n;
      else
        os << std::get<std::string>(r[i]);
    }
    os << '\n';
  }
  return os.str();
}

void Csv::save(const std::string& path) const { save_text(path, str()); }

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

namespace {

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string svg_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel, const std::vector<Series>& series,
                      bool log_y) {
  const double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [log_y](double y) { return log_y ? std::log10(y) : y; };
  auto usable = [log_y](double y) { return std::isfinite(y) && (!log_y || y > 0); };
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i])), y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x1 >= x0)) x0 = 0, x1 = 1;
  if (!(y1 >= y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
    const double sx = left + pw * i / 4, sy = top + ph - ph * i / 4;
    os << "<text x=\"" << num(sx) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy + 4) << "\" text-anchor=\"end\">" << (log_y ? "1e" + tick(fy) : tick(fy)) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 10) << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << num(top + ph / 2) << ")\">"
     << escape(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* c = colors[k % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      os << (first ? "" : " ") << num(px(s.x[i])) << "," << num(py(s.y[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 14 + 18 * k;
    os << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 30) << "\" y2=\"" << num(ly) << "\" stroke=\"" << c
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(left + pw + 35) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<double> parse_coefficients(const std::string& text, const std::string& path) {
  std::map<long, double> coef;
  std::map<long, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& m) { throw InputError(path + ":" + std::to_string(line) + ": " + m); };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::istringstream ls(raw.substr(0, hash));
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) fail("expected two columns 'l a_l'");
    long l = 0;
    try {
      std::size_t used = 0;
      l = std::stol(a, &used);
      if (used != a.size()) fail("degree '" + a + "' is not an integer");
    } catch (const std::logic_error&) {
      fail("degree '" + a + "' is not an integer");
    }
    if (l < 0 || l > 100000) fail("degree " + a + " out of range");
    double v = 0;
    try {
      v = parse_number(b);
    } catch (const InputError&) {
      fail("coefficient '" + b + "' is not a number");
    }
    if (!std::isfinite(v)) fail("coefficient is not finite");
    if (seen.count(l)) fail("degree " + std::to_string(l) + " repeats line " + std::to_string(seen[l]));
    seen[l] = line;
    coef[l] = v;
  }
  if (coef.empty()) throw InputError(path + ": no coefficients");
  std::vector<double> out(coef.rbegin()->first + 1, 0.0);
  for (const auto& [l, v] : coef) out[l] = v;
  return out;
}

std::vector<double> read_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_coefficients(ss.str(), path);
}

}  // namespace stvac::cli
