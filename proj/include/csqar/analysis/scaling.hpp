#pragma once

// Optimal cold-qubit temperature and first-minimum time as functions of the bath size
// N = N1 = N2 = N3, with power-law fits and Neville extrapolation in h = 1/N.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csqar/analysis/cooling_objective.hpp"
#include "csqar/analysis/neville.hpp"
#include "csqar/analysis/optimizer.hpp"
#include "csqar/analysis/power_law.hpp"
#include "csqar/analysis/time_minimum.hpp"

namespace csqar::analysis {

struct ScalingOptions {
    OptimizerOptions optimizer;
    OptimizeRanges ranges;
    double pruneTol = 1e-12;
    /// Bath sizes fed to Neville when present in the sweep.
    std::vector<int> nevilleNs{2, 4, 7, 14, 50};
    /// Points with N >= asymptoteMinN are averaged into the T1 asymptote.
    int asymptoteMinN = 35;
};

struct ScalingRow {
    int n = 0;
    OptimizationResult optimum;
    /// First local minimum in time of T1 at the optimal couplings.
    std::optional<LocalMinimum> firstMin;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    std::optional<FitResult> t1Fit;
    std::optional<NevilleTableau> t1Neville;
    std::optional<FitResult> tlFit;
    std::optional<NevilleTableau> tlNeville;
    std::vector<std::string> warnings;
};

/// T1 series at the optimum of `row`, and its first local minimum refined on the
/// continuous curve.
std::optional<LocalMinimum> first_minimum_at(const engine::RefrigeratorParams& base,
                                             const OptimizationResult& optimum,
                                             const TimeScan& scan, double pruneTol);

/// One optimization per N (in the given order), then summarize().
ScalingReport scaling_sweep(const engine::RefrigeratorParams& base, std::span<const int> ns,
                            const ScalingOptions& options);

/// Fits and extrapolations over existing rows. T1: asymptote from the N >= asymptoteMinN
/// average, else from Neville. t_l: asymptote from Neville, else the average.
/// Missing inputs leave the corresponding optional empty and add a warning.
ScalingReport summarize(std::vector<ScalingRow> rows, const ScalingOptions& options);

} // namespace csqar::analysis
