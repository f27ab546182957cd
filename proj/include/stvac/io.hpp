#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "stvac/tensor.hpp"

namespace stvac {

// Columnar text format.
//
//   stvac <kind> 1
//   meta <key> <value>              (any number)
//   block <name>
//   meta <key> <value>              (block-level, optional)
//   order <p>
//   axis <name> periodic|interval <count> <origin> <spacing> [radial]
//   coord <name> <axis-index>|fiber
//   field <name> <up> <down> general|symmetric
//   columns <labels...>
//   rows <count>
//   <one row per node: axis coordinates, then the components of each field>
//   end
//
// Numbers are written as hexadecimal float literals and read back exactly;
// decimal input is accepted too.

using Meta = std::vector<std::pair<std::string, std::string>>;

struct Block {
  std::string name;
  Chart chart;
  Meta meta;
  std::vector<std::pair<std::string, TensorField>> fields;

  const TensorField& field(const std::string& n) const;
  bool has_field(const std::string& n) const;
  std::string meta_value(const std::string& key) const;
};

struct Bundle {
  std::string kind;
  Meta meta;
  std::vector<Block> blocks;

  const Block& block(const std::string& n) const;
  bool has_meta(const std::string& key) const;
  std::string meta_value(const std::string& key) const;
  double meta_number(const std::string& key) const;
};

std::string hex(double v);
double parse_number(const std::string& s);  // hex or decimal, throws InputError

void write_bundle(std::ostream& os, const Bundle& b);
Bundle read_bundle(std::istream& is);
void save_bundle(const std::string& path, const Bundle& b);
Bundle load_bundle(const std::string& path);

void write_field(std::ostream& os, const TensorField& t, const std::string& name = "field");
TensorField read_field(std::istream& is);

}  // namespace stvac
