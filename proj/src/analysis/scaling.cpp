#include "csqar/analysis/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "csqar/error.hpp"

namespace csqar::analysis {

std::optional<LocalMinimum> first_minimum_at(const engine::RefrigeratorParams& base,
                                             const OptimizationResult& optimum,
                                             const TimeScan& scan, double pruneTol) {
    const CoolingObjective objective(base, pruneTol, scan);
    const engine::Refrigerator e = objective.engineAt(optimum.point());
    const kernels::ModeSet m = e.modes(engine::Observable::GroundPopulation, 1);
    const kernels::UniformGrid grid = scan.grid();
    const std::vector<double> r = kernels::evaluate_on_grid(m, grid);
    std::vector<double> t(grid.count), v(grid.count);
    const double eps = base.epsilon[0];
    for (std::size_t k = 0; k < grid.count; ++k) {
        t[k] = grid.at(k);
        v[k] = cooling_value(r[k], eps);
    }
    return first_local_min(t, v, [&](double time) { return cooling_value(m.evaluate(time), eps); });
}

ScalingReport scaling_sweep(const engine::RefrigeratorParams& base, std::span<const int> ns,
                            const ScalingOptions& options) {
    std::vector<ScalingRow> rows;
    for (int n : ns) {
        if (n < 1) throw DomainError("scaling_sweep: N must be >= 1");
        engine::RefrigeratorParams p = base;
        p.nBath = {n, n, n};
        ScalingRow row;
        row.n = n;
        row.optimum = optimize_t1(p, options.ranges, options.optimizer, options.pruneTol);
        row.firstMin = first_minimum_at(p, row.optimum, options.ranges.scan, options.pruneTol);
        rows.push_back(std::move(row));
    }
    return summarize(std::move(rows), options);
}

namespace {

std::optional<NevilleTableau> nevilleOver(const std::vector<ScalingRow>& rows,
                                          const std::vector<int>& wanted, bool timing) {
    std::vector<double> h, y;
    for (int n : wanted)
        for (const auto& row : rows)
            if (row.n == n) {
                if (timing && !row.firstMin) continue;
                h.push_back(1.0 / n);
                y.push_back(timing ? row.firstMin->time : row.optimum.bestT1);
                break;
            }
    if (h.size() < 2) return std::nullopt;
    return neville_extrapolate(h, y, 0.0);
}

} // namespace

ScalingReport summarize(std::vector<ScalingRow> rows, const ScalingOptions& options) {
    ScalingReport rep;
    rep.rows = std::move(rows);
    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const ScalingRow& a, const ScalingRow& b) { return a.n < b.n; });

    rep.t1Neville = nevilleOver(rep.rows, options.nevilleNs, false);
    rep.tlNeville = nevilleOver(rep.rows, options.nevilleNs, true);
    if (rep.t1Neville && !rep.t1Neville->stable) rep.warnings.push_back("T1 Neville: " + rep.t1Neville->warning);
    if (rep.tlNeville && !rep.tlNeville->stable) rep.warnings.push_back("t_l Neville: " + rep.tlNeville->warning);

    std::vector<double> n, t1, nl, tl;
    for (const auto& row : rep.rows) {
        n.push_back(row.n);
        t1.push_back(row.optimum.bestT1);
        if (row.firstMin) {
            nl.push_back(row.n);
            tl.push_back(row.firstMin->time);
        }
    }
    auto fit = [&](const std::vector<double>& x, const std::vector<double>& y,
                   std::optional<double> tInf, const char* what) -> std::optional<FitResult> {
        if (!tInf) {
            rep.warnings.push_back(std::string(what) + " fit skipped: no asymptote available");
            return std::nullopt;
        }
        try {
            return fit_power_law(x, y, *tInf);
        } catch (const DomainError& e) {
            rep.warnings.push_back(std::string(what) + " fit skipped: " + e.what());
            return std::nullopt;
        }
    };
    auto average = [&](const std::vector<double>& x, const std::vector<double>& y) -> std::optional<double> {
        try {
            return asymptote_average(x, y, options.asymptoteMinN);
        } catch (const DomainError&) {
            return std::nullopt;
        }
    };

    std::optional<double> t1Inf = average(n, t1);
    if (!t1Inf && rep.t1Neville) t1Inf = rep.t1Neville->extrapolated;
    rep.t1Fit = fit(n, t1, t1Inf, "T1");

    std::optional<double> tlInf;
    if (rep.tlNeville) tlInf = rep.tlNeville->extrapolated;
    else tlInf = average(nl, tl);
    rep.tlFit = fit(nl, tl, tlInf, "t_l");
    return rep;
}

} // namespace csqar::analysis
