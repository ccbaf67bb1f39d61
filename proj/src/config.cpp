#include "sramwb/config.hpp"

#include <algorithm>
#include <fstream>

#include "sramwb/errors.hpp"
#include "sramwb/units.hpp"

namespace sramwb {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

TechnologyInputs parse_config(std::istream& in) {
  TechnologyInputs raw;
  const auto& keys = technology_keys();
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto hash = line.find_first_of("#*");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(no) + ": expected 'name = value'");
    std::string key = trim(line.substr(0, eq));
    std::string text = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("config line " + std::to_string(no) + ": unknown key '" + key + "'");
    auto value = try_parse_value(text);
    if (!value)
      throw ConfigError("config line " + std::to_string(no) + ": bad value '" + text + "'");
    raw.values[key] = *value;
  }
  return raw;
}

TechnologyParams load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  try {
    return derive_tech_params(parse_config(in));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace sramwb
