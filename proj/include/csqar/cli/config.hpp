#pragma once

// Run configuration, read from JSON. Every field is optional and falls back to the
// defaults below; unknown keys are rejected so that typos surface as config errors.
// See README.md for the schema.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csqar/analysis/cooling_objective.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/markov/gksl.hpp"
#include "csqar/spinstar/single_star.hpp"

namespace csqar::cli {

enum class Mode { Single, Evolve, Optimize, Scaling, Markov, Validate };
enum class OutputFormat { Csv, Json };

std::string to_string(Mode m);
std::string to_string(OutputFormat f);

struct TimeGridConfig {
    double start = 0.0;
    double stop = 10.0;
    double step = 0.005;

    kernels::UniformGrid grid() const;
};

struct OptimizationConfig {
    analysis::OptimizeRanges ranges;
    std::size_t budget = 2000;
    std::size_t starts = 8;
    std::uint64_t seed = 1;
};

struct ScalingConfig {
    std::vector<int> nList{2, 4, 7, 10, 14, 20, 30, 40, 50};
    std::size_t budget = 600;
    std::vector<int> nevilleN{2, 4, 7, 14, 50};
};

struct MarkovConfig {
    markov::MarkovParams params;
    bool optimize = false;
    markov::MarkovRanges ranges;
    std::size_t budget = 2000;
};

struct OutputConfig {
    std::string path; ///< empty: standard output
    OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
    Mode mode = Mode::Evolve;
    engine::RefrigeratorParams params;
    /// Optional path of an `optimize` JSON report whose couplings replace params'.
    std::string couplingsFrom;
    spinstar::SingleStarParams single{1.0, 2.0, 0.5, 4, 1.0};
    TimeGridConfig timeGrid;
    OptimizationConfig optimization;
    ScalingConfig scaling;
    MarkovConfig markov;
    double pruneTol = 1e-12;
    OutputConfig output;
};

/// Throws ConfigError carrying the JSON path of the offending field. Physical
/// constraints (N >= 1, beta > 0, weak coupling, ...) are checked when the run starts.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Fully resolved configuration; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);

} // namespace csqar::cli
