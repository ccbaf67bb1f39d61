// Technology config files: one `name = value` per line, SI units with the
// usual SPICE suffixes, '#' or '*' starts a comment.
#pragma once

#include <istream>
#include <string>

#include "sramwb/devices.hpp"

namespace sramwb {

// Throws ConfigError naming the line for malformed lines and unknown keys.
TechnologyInputs parse_config(std::istream& in);

// parse_config + derive_tech_params. Throws Error with the path if unreadable.
TechnologyParams load_config(const std::string& path);

}  // namespace sramwb
