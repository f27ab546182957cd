#include "stvac/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stvac/error.hpp"

namespace stvac {

namespace {

struct LineReader {
  std::istream& is;
  int line = 0;
  std::string text;

  bool next() {
    while (std::getline(is, text)) {
      ++line;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      const auto p = text.find_first_not_of(" \t");
      if (p == std::string::npos || text[p] == '#') continue;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("line " + std::to_string(line) + ": " + msg);
  }
  std::vector<std::string> words() const {
    std::istringstream ss(text);
    std::vector<std::string> w;
    for (std::string s; ss >> s;) w.push_back(s);
    return w;
  }
  void expect(const std::string& key, std::vector<std::string>& w) {
    if (!next()) fail("unexpected end of input, expected '" + key + "'");
    w = words();
    if (w.empty() || w[0] != key) fail("expected '" + key + "'");
  }
  int integer(const std::string& s) const {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') fail("not an integer: " + s);
    return static_cast<int>(v);
  }
  double number(const std::string& s) const {
    try {
      return parse_number(s);
    } catch (const InputError& e) {
      fail(e.what());
    }
  }
};

std::string meta_lookup(const Meta& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return v;
  throw InputError("missing metadata key '" + key + "'");
}

std::string component_label(const std::string& field, const TensorField& t, std::size_t c) {
  std::string s = field;
  if (t.rank() == 0) return s;
  s += "_";
  for (int i : t.multi_index(c)) s += std::to_string(i);
  return s;
}

Block read_block(LineReader& in, const std::string& name) {
  Block b;
  b.name = name;
  std::vector<std::string> w;
  int order = 4;
  std::vector<Axis> axes;
  std::vector<Coordinate> coords;
  struct Decl {
    std::string name;
    int up, down;
    Symmetry sym;
  };
  std::vector<Decl> decls;
  while (true) {
    if (!in.next()) in.fail("unexpected end of input inside block " + name);
    w = in.words();
    if (w[0] == "meta") {
      if (w.size() < 3) in.fail("meta needs a key and a value");
      b.meta.emplace_back(w[1], w[2]);
    } else if (w[0] == "order") {
      if (w.size() != 2) in.fail("order takes one value");
      order = in.integer(w[1]);
    } else if (w[0] == "axis") {
      if (w.size() < 6 || w.size() > 7) in.fail("axis needs name, topology, count, origin, spacing");
      Axis ax;
      ax.name = w[1];
      if (w[2] == "periodic")
        ax.topology = Topology::periodic;
      else if (w[2] == "interval")
        ax.topology = Topology::interval;
      else
        in.fail("unknown topology " + w[2]);
      ax.count = in.integer(w[3]);
      ax.origin = in.number(w[4]);
      ax.spacing = in.number(w[5]);
      if (w.size() == 7) {
        if (w[6] != "radial") in.fail("unexpected token " + w[6]);
        ax.radial = true;
      }
      axes.push_back(ax);
    } else if (w[0] == "coord") {
      if (w.size() != 3) in.fail("coord needs a name and an axis index or 'fiber'");
      coords.push_back({w[1], w[2] == "fiber" ? -1 : in.integer(w[2])});
    } else if (w[0] == "field") {
      if (w.size() != 5) in.fail("field needs name, up, down, symmetry");
      Symmetry s = Symmetry::general;
      if (w[4] == "symmetric")
        s = Symmetry::symmetric;
      else if (w[4] != "general")
        in.fail("unknown symmetry " + w[4]);
      decls.push_back({w[1], in.integer(w[2]), in.integer(w[3]), s});
    } else if (w[0] == "columns") {
      // labels are informational; their count is checked against the rows
    } else if (w[0] == "rows") {
      break;
    } else {
      in.fail("unexpected keyword " + w[0]);
    }
  }
  if (w.size() != 2) in.fail("rows takes a count");
  const long rows = in.integer(w[1]);
  try {
    Grid g(axes, order);
    b.chart = Chart(g, coords);
  } catch (const InputError& e) {
    in.fail(e.what());
  }
  if (rows != static_cast<long>(b.chart.size())) in.fail("row count does not match the grid");
  std::size_t width = b.chart.grid().rank();
  for (const auto& d : decls) {
    try {
      b.fields.emplace_back(d.name, TensorField(b.chart, d.up, d.down, d.sym));
    } catch (const InputError& e) {
      in.fail(e.what());
    }
    width += b.fields.back().second.components();
  }
  for (long r = 0; r < rows; ++r) {
    if (!in.next()) in.fail("unexpected end of input in data rows");
    const auto vals = in.words();
    if (vals.size() != width) in.fail("expected " + std::to_string(width) + " columns, found " + std::to_string(vals.size()));
    std::size_t col = b.chart.grid().rank();
    for (auto& [fn, t] : b.fields)
      for (std::size_t c = 0; c < t.components(); ++c) t.at(r, c) = in.number(vals[col++]);
  }
  for (auto& [fn, t] : b.fields)
    if (t.symmetry() == Symmetry::symmetric && t.symmetry_defect() > 1e-12 * std::max(1.0, t.max_abs()))
      in.fail("field " + fn + " is flagged symmetric but is not");
  in.expect("end", w);
  return b;
}

void write_block(std::ostream& os, const Block& b) {
  os << "block " << b.name << "\n";
  for (const auto& [k, v] : b.meta) os << "meta " << k << " " << v << "\n";
  const Grid& g = b.chart.grid();
  os << "order " << g.fd_order() << "\n";
  for (const auto& ax : g.axes())
    os << "axis " << ax.name << " " << (ax.topology == Topology::periodic ? "periodic" : "interval") << " " << ax.count << " "
       << hex(ax.origin) << " " << hex(ax.spacing) << (ax.radial ? " radial" : "") << "\n";
  for (const auto& c : b.chart.coordinates())
    os << "coord " << c.name << " " << (c.axis < 0 ? std::string("fiber") : std::to_string(c.axis)) << "\n";
  for (const auto& [fn, t] : b.fields) {
    if (!(t.chart() == b.chart)) throw InputError("block " + b.name + ": field " + fn + " lives on another chart");
    os << "field " << fn << " " << t.up() << " " << t.down() << " "
       << (t.symmetry() == Symmetry::symmetric ? "symmetric" : "general") << "\n";
  }
  os << "columns";
  for (const auto& ax : g.axes()) os << " " << ax.name;
  for (const auto& [fn, t] : b.fields)
    for (std::size_t c = 0; c < t.components(); ++c) os << " " << component_label(fn, t, c);
  os << "\nrows " << g.size() << "\n";
  std::string line;
  for (std::size_t n = 0; n < g.size(); ++n) {
    line.clear();
    for (int a = 0; a < g.rank(); ++a) {
      if (a) line += ' ';
      line += hex(g.coord(n, a));
    }
    for (const auto& [fn, t] : b.fields)
      for (std::size_t c = 0; c < t.components(); ++c) {
        line += ' ';
        line += hex(t.at(n, c));
      }
    os << line << "\n";
  }
  os << "end\n";
}

}  // namespace

const TensorField& Block::field(const std::string& n) const {
  for (const auto& [k, t] : fields)
    if (k == n) return t;
  throw InputError("block " + name + " has no field '" + n + "'");
}

bool Block::has_field(const std::string& n) const {
  for (const auto& [k, t] : fields)
    if (k == n) return true;
  return false;
}

std::string Block::meta_value(const std::string& key) const { return meta_lookup(meta, key); }

const Block& Bundle::block(const std::string& n) const {
  for (const auto& b : blocks)
    if (b.name == n) return b;
  throw InputError("missing block '" + n + "'");
}

bool Bundle::has_meta(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return true;
  return false;
}

std::string Bundle::meta_value(const std::string& key) const { return meta_lookup(meta, key); }

double Bundle::meta_number(const std::string& key) const { return parse_number(meta_value(key)); }

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s.empty()) throw InputError("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) throw InputError("not a number: " + s);
  return v;
}

void write_bundle(std::ostream& os, const Bundle& b) {
  os << "stvac " << b.kind << " 1\n";
  for (const auto& [k, v] : b.meta) os << "meta " << k << " " << v << "\n";
  for (const auto& blk : b.blocks) write_block(os, blk);
}

Bundle read_bundle(std::istream& is) {
  LineReader in{is, 0, {}};
  Bundle b;
  if (!in.next()) throw InputError("empty input");
  auto w = in.words();
  if (w.size() != 3 || w[0] != "stvac" || w[2] != "1") in.fail("expected header 'stvac <kind> 1'");
  b.kind = w[1];
  while (in.next()) {
    w = in.words();
    if (w[0] == "meta") {
      if (w.size() < 3) in.fail("meta needs a key and a value");
      b.meta.emplace_back(w[1], w[2]);
    } else if (w[0] == "block") {
      if (w.size() != 2) in.fail("block takes a name");
      b.blocks.push_back(read_block(in, w[1]));
    } else {
      in.fail("unexpected keyword " + w[0]);
    }
  }
  return b;
}

void save_bundle(const std::string& path, const Bundle& b) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path);
  write_bundle(os, b);
  if (!os) throw InputError("write failed for " + path);
}

Bundle load_bundle(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  try {
    return read_bundle(is);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_field(std::ostream& os, const TensorField& t, const std::string& name) {
  Bundle b{"field", {}, {Block{name, t.chart(), {}, {{name, t}}}}};
  write_bundle(os, b);
}

TensorField read_field(std::istream& is) {
  const Bundle b = read_bundle(is);
  if (b.blocks.size() != 1 || b.blocks[0].fields.size() != 1) throw InputError("expected a single-field file");
  return b.blocks[0].fields[0].second;
}

}  // namespace stvac
