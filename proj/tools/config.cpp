#include "config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stvac::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw InputError(path + ":" + std::to_string(line) + ": " + msg);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  return true;
}

}  // namespace

ConfigFile parse_config_text(const std::string& text, const std::string& path) {
  ConfigFile cfg;
  cfg.path = path;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s[0] == '[') {
      if (s.back() != ']') fail(path, line, "unterminated section header");
      std::string name = trim(s.substr(1, s.size() - 2));
      for (char& c : name)
        if (c == ' ' || c == '\t') c = '.';
      while (name.find("..") != std::string::npos) name.erase(name.find(".."), 1);
      if (!valid_name(name)) fail(path, line, "invalid section name '" + name + "'");
      section = name;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(path, line, "expected 'key = value'");
    ConfigEntry e;
    e.section = section;
    e.key = trim(s.substr(0, eq));
    e.value = trim(s.substr(eq + 1));
    e.line = line;
    if (!valid_name(e.key) || e.key.find('.') != std::string::npos) fail(path, line, "invalid key '" + e.key + "'");
    if (!e.value.empty() && e.value.front() == '"') {
      if (e.value.size() < 2 || e.value.back() != '"') fail(path, line, "unterminated quoted value");
      e.value = e.value.substr(1, e.value.size() - 2);
    }
    cfg.entries.push_back(std::move(e));
  }
  return cfg;
}

ConfigFile parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_config(CLI::App& app, const ConfigFile& cfg) {
  // options set on the command line keep their values
  std::set<const CLI::Option*> given;
  std::map<std::string, CLI::App*> sections{{"", &app}};
  std::function<void(CLI::App*, const std::string&)> walk = [&](CLI::App* a, const std::string& prefix) {
    for (const CLI::Option* o : a->get_options())
      if (o->count() > 0) given.insert(o);
    for (CLI::App* sub : a->get_subcommands({})) {
      const std::string name = prefix.empty() ? sub->get_name() : prefix + "." + sub->get_name();
      sections[name] = sub;
      walk(sub, name);
    }
  };
  walk(&app, "");

  std::map<const CLI::Option*, int> touched;
  for (const ConfigEntry& e : cfg.entries) {
    const auto it = sections.find(e.section);
    if (it == sections.end()) fail(cfg.path, e.line, "unknown section [" + e.section + "]");
    CLI::Option* opt = it->second->get_option_no_throw("--" + e.key);
    if (opt == nullptr || opt->get_lnames().empty())
      fail(cfg.path, e.line, "unknown key '" + e.key + "'" + (e.section.empty() ? "" : " in [" + e.section + "]"));
    if (given.count(opt)) continue;
    if (touched.count(opt) && opt->get_items_expected_max() <= 1)
      fail(cfg.path, e.line, "duplicate key '" + e.key + "' (first set on line " + std::to_string(touched[opt]) + ")");
    touched.emplace(opt, e.line);
    try {
      if (opt->get_items_expected_max() == 0) {
        // flags take true/false
        if (e.value != "true" && e.value != "false" && e.value != "1" && e.value != "0")
          fail(cfg.path, e.line, "flag '" + e.key + "' expects true or false");
        if (e.value == "false" || e.value == "0") continue;
        opt->add_result(std::string("true"));
      } else {
        opt->add_result(e.value);
      }
      opt->run_callback();
    } catch (const CLI::Error& err) {
      fail(cfg.path, e.line, "invalid value for '" + e.key + "': " + err.what());
    }
  }
}

}  // namespace stvac::cli
