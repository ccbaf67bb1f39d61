// Command-line front end. Each subcommand maps onto one library operation and
// prints an AnalysisReport; --out writes the CSV or netlist side channel.
//
// Exit codes: 0 success, 1 analysis failure (non-convergence, non-writable
// cell, failed measurement), 2 usage, parse, config or file errors.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sramwb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sramwb::cli
