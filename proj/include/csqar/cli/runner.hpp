#pragma once

// Executes one RunConfig. Time series (single, evolve, markov) are written as CSV or
// JSON according to output.format; optimize, scaling and validate always write JSON.
// Every output starts with the library version and the fully resolved config.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "csqar/cli/config.hpp"

namespace csqar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Largest oracle deviation accepted by `validate`.
inline constexpr double kValidateTolerance = 1e-9;

std::string version();

/// %.17g, so that values round-trip.
std::string format_number(double v);

/// Applies params.couplingsFrom (A_i and g from an optimize report) and clears it.
/// Throws ConfigError if the report cannot be read.
RunConfig resolve(RunConfig config);

/// Runs the resolved config and returns the complete output text.
std::string execute(const RunConfig& resolved);

/// resolve + execute + write to output.path (or `out` when empty). Maps errors to exit
/// codes and prints their message to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace csqar::cli
