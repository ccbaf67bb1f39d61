// SPICE-style engineering numbers: "97.083f", "10k", "100meg".
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sramwb {

// Parses a number with an optional scale suffix (f p n u m k meg g t,
// case-insensitive). The decimal value is rounded once, so "1000u" and
// "0.001" produce the same double. Throws std::invalid_argument.
double parse_value(std::string_view text);
std::optional<double> try_parse_value(std::string_view text);

// Shortest round-tripping representation using the suffix that keeps the
// mantissa in [1, 1000). Zero prints as `zero_text`.
std::string format_value(double value, std::string_view zero_text = "0");

// Shortest round-tripping plain decimal/scientific form ("6.3e-6").
std::string format_plain(double value);

}  // namespace sramwb
