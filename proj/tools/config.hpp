#pragma once

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stvac/error.hpp"

namespace stvac::cli {

// Key-value configuration with sections.
//
//   # comment           (also ';')
//   key = value         top-level keys set global options
//   [section]           a subcommand path, words separated by '.' or blanks
//   key = value         an option of that subcommand, without leading dashes
//
// Values may be quoted with double quotes. Keys repeat only for list options.
struct ConfigEntry {
  std::string section;  // "" for global, else e.g. "kid.check"
  std::string key, value;
  int line = 0;
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigEntry> entries;
};

// throws InputError "<path>:<line>: <message>"
ConfigFile parse_config(const std::string& path);
ConfigFile parse_config_text(const std::string& text, const std::string& path = "<config>");

// Applies entries to options not given on the command line; unknown
// sections, unknown keys and values rejected by the option all raise
// InputError with the line of the entry.
void apply_config(CLI::App& app, const ConfigFile& cfg);

}  // namespace stvac::cli
