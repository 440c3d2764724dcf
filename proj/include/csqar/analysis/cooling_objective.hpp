#pragma once

// Cold-qubit temperature as a function of the couplings x = (A1, A2, A3, g): the
// minimum of T1 over a uniform time grid, with sector spectra built once per x.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "csqar/analysis/optimizer.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/kernels/phasor.hpp"

namespace csqar::analysis {

struct TimeScan {
    double tMax = 10.0;
    double step = 0.005;

    kernels::UniformGrid grid() const;
};

/// T = eps / ln(r / (1 - r)) for 1/2 < r < 1, +inf otherwise. Used as a minimization
/// target, so infinite and negative temperatures never win.
double cooling_value(double r, double epsilon);

class CoolingObjective {
public:
    CoolingObjective(const engine::RefrigeratorParams& base, double pruneTol = 1e-12,
                     TimeScan scan = {});

    engine::RefrigeratorParams paramsAt(std::span<const double> x) const;
    engine::Refrigerator engineAt(std::span<const double> x, std::size_t threads = 1) const;

    /// Grid minimum of T1 and its time.
    Evaluation operator()(std::span<const double> x) const;
    /// T1 at one time (cooling_value of the exact r1).
    double t1At(std::span<const double> x, double t) const;

    const TimeScan& scan() const noexcept { return scan_; }
    double pruneTol() const noexcept { return pruneTol_; }

private:
    engine::RefrigeratorParams base_;
    double pruneTol_;
    TimeScan scan_;
    engine::SectorEnumeration sectors_;
};

struct OptimizeRanges {
    std::array<double, 3> couplingLow{0.0, 0.0, 0.0};
    std::array<double, 3> couplingHigh{1.0, 1.0, 1.0};
    double gLow = 0.0;
    double gHigh = 0.1;
    TimeScan scan;
};

struct OptimizationResult {
    std::array<double, 3> coupling{};
    double g = 0.0;
    double bestTime = 0.0;
    double bestT1 = 0.0;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
    std::vector<double> incumbent;

    std::vector<double> point() const { return {coupling[0], coupling[1], coupling[2], g}; }
};

/// Multistart search over (A1, A2, A3, g); the winner's time is then refined by golden
/// section between its grid neighbours, so bestT1 is T1 at exactly bestTime.
OptimizationResult optimize_t1(const engine::RefrigeratorParams& base, const OptimizeRanges& ranges,
                               const OptimizerOptions& options, double pruneTol = 1e-12);

} // namespace csqar::analysis
