#include "csqar/analysis/cooling_objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csqar/analysis/time_minimum.hpp"
#include "csqar/error.hpp"

namespace csqar::analysis {

kernels::UniformGrid TimeScan::grid() const {
    if (!(step > 0.0) || !(tMax >= 0.0)) throw DomainError("TimeScan: need step > 0, tMax >= 0");
    return {0.0, step, static_cast<std::size_t>(std::floor(tMax / step + 1e-9)) + 1};
}

double cooling_value(double r, double epsilon) {
    if (!(r > 0.5 && r < 1.0)) return std::numeric_limits<double>::infinity();
    return epsilon / std::log(r / (1.0 - r));
}

CoolingObjective::CoolingObjective(const engine::RefrigeratorParams& base, double pruneTol,
                                   TimeScan scan)
    : base_(base), pruneTol_(pruneTol), scan_(scan),
      sectors_(engine::enumerate_triple_sectors(base, pruneTol)) {
    (void)scan_.grid();
}

engine::RefrigeratorParams CoolingObjective::paramsAt(std::span<const double> x) const {
    if (x.size() != 4) throw DomainError("CoolingObjective: expected (A1, A2, A3, g)");
    engine::RefrigeratorParams p = base_;
    p.coupling = {x[0], x[1], x[2]};
    p.g = x[3];
    return p;
}

engine::Refrigerator CoolingObjective::engineAt(std::span<const double> x,
                                                std::size_t threads) const {
    return engine::Refrigerator(paramsAt(x), sectors_, pruneTol_, threads);
}

Evaluation CoolingObjective::operator()(std::span<const double> x) const {
    const engine::Refrigerator e = engineAt(x);
    const kernels::UniformGrid grid = scan_.grid();
    const std::vector<double> r =
        kernels::evaluate_on_grid(e.modes(engine::Observable::GroundPopulation, 1), grid);
    Evaluation best{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double v = cooling_value(r[k], base_.epsilon[0]);
        if (v < best.value) best = {v, grid.at(k)};
    }
    return best;
}

double CoolingObjective::t1At(std::span<const double> x, double t) const {
    const engine::Refrigerator e = engineAt(x);
    return cooling_value(e.modes(engine::Observable::GroundPopulation, 1).evaluate(t),
                         base_.epsilon[0]);
}

OptimizationResult optimize_t1(const engine::RefrigeratorParams& base, const OptimizeRanges& ranges,
                               const OptimizerOptions& options, double pruneTol) {
    if (options.budget < 1) throw DomainError("optimize_t1: budget must be >= 1");
    const CoolingObjective objective(base, pruneTol, ranges.scan);
    Box box;
    box.lower = {ranges.couplingLow[0], ranges.couplingLow[1], ranges.couplingLow[2], ranges.gLow};
    box.upper = {ranges.couplingHigh[0], ranges.couplingHigh[1], ranges.couplingHigh[2],
                 ranges.gHigh};
    box.validate();
    const SearchResult r =
        minimize_box([&](std::span<const double> x) { return objective(x); }, box, options);

    OptimizationResult out;
    out.coupling = {r.best[0], r.best[1], r.best[2]};
    out.g = r.best[3];
    out.bestTime = r.bestEval.time;
    out.bestT1 = r.bestEval.value;
    out.evaluations = r.evaluations;
    out.restarts = r.restarts;
    out.incumbent = r.incumbent;

    if (std::isfinite(out.bestT1)) {
        const engine::Refrigerator e = objective.engineAt(r.best);
        const kernels::ModeSet m = e.modes(engine::Observable::GroundPopulation, 1);
        const double eps = base.epsilon[0];
        const double step = ranges.scan.step;
        const double lo = std::max(0.0, out.bestTime - step);
        const double hi = std::min(ranges.scan.tMax, out.bestTime + step);
        const ScalarMinimum s = golden_section(
            [&](double t) { return cooling_value(m.evaluate(t), eps); }, lo, hi, 1e-9);
        const double atGrid = cooling_value(m.evaluate(out.bestTime), eps);
        if (s.value < atGrid) {
            out.bestTime = s.x;
            out.bestT1 = s.value;
        } else {
            out.bestT1 = atGrid;
        }
    }
    return out;
}

} // namespace csqar::analysis
