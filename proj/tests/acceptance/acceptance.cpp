// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   csqar_acceptance [--quick] [--budget N] [--seed S]
//
// --quick replaces the full bath-size sweep by N <= 14 and checks only the
// extrapolated T1 asymptote there (tolerance 0.03).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csqar/analysis/neville.hpp"
#include "csqar/analysis/scaling.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/markov/gksl.hpp"
#include "csqar/oracle/dense_model.hpp"
#include "csqar/spinstar/single_star.hpp"
#include "csqar/thermo/heat_currents.hpp"

using namespace csqar;
using engine::Observable;
using engine::Refrigerator;
using engine::RefrigeratorParams;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& detail, Clock::time_point start) {
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %d: %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// ---------------------------------------------------------------------------

void singleStarOracle() {
    const auto start = Clock::now();
    double worst = 0.0;
    const std::vector<double> energies{0.5, 1.0, 2.0};
    for (int n = 1; n <= 6; ++n)
        for (double eps : energies)
            for (double e : energies)
                for (double a : {0.1, 0.5})
                    for (double beta : {0.5, 1.0}) {
                        const spinstar::SingleStarParams p{eps, e, a, n, beta};
                        const oracle::DenseModel model = oracle::build_dense(p);
                        for (double t : {0.0, 0.7, 3.1}) {
                            const ComplexMatrix rho = oracle::dense_evolve(model, t);
                            const ComplexMatrix s = oracle::partial_trace(rho, model.factorDims, 0);
                            const double r = spinstar::reduced_spin_state(p, t).groundPopulation;
                            worst = std::max({worst, std::abs(s(0, 0) - r), std::abs(s(1, 1) - (1.0 - r)),
                                              std::abs(s(0, 1)), std::abs(s(1, 0))});
                            const ComplexMatrix b = oracle::partial_trace(rho, model.factorDims, 1);
                            const std::vector<double> pb = spinstar::reduced_bath_state(p, t);
                            for (std::size_t i = 0; i < pb.size(); ++i)
                                for (std::size_t k = 0; k < pb.size(); ++k)
                                    worst = std::max(worst, std::abs(b(i, k) - (i == k ? pb[i] : 0.0)));
                        }
                    }
    report(1, worst < 1e-9, fmt("max deviation %.3g over N=1..6", worst), start);
}

RefrigeratorParams smallParams(std::array<int, 3> n, bool autonomous) {
    RefrigeratorParams p;
    p.nBath = n;
    if (autonomous) {
        p.g = 0.3;
    } else {
        p.epsilon = {1.0, 1.7, 0.8};
        p.bathEnergy = {1.5, 3.1, 2.4};
        p.coupling = {0.35, 0.6, 0.45};
        p.g = 0.2;
        p.beta = {0.9, 1.3, 0.4};
    }
    return p;
}

void refrigeratorOracle() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (const auto& n : {std::array<int, 3>{1, 1, 1}, std::array<int, 3>{2, 1, 1}})
        for (bool autonomous : {true, false}) {
            const RefrigeratorParams p = smallParams(n, autonomous);
            const Refrigerator eng(p, 0.0, 1);
            const oracle::DenseModel model = oracle::build_dense(p);
            for (double t : {0.0, 2.0, 5.0}) {
                const ComplexMatrix rho = oracle::dense_evolve(model, t);
                for (int q = 1; q <= 3; ++q) {
                    const ComplexMatrix s = oracle::partial_trace(rho, model.factorDims, oracle::qubit_factor(q));
                    const double r = eng.reducedQubitState(q, t).groundPopulation;
                    worst = std::max({worst, std::abs(s(0, 0) - r), std::abs(s(1, 1) - (1.0 - r)),
                                      std::abs(s(0, 1))});
                    const ComplexMatrix b = oracle::partial_trace(rho, model.factorDims, oracle::bath_factor(q));
                    const std::vector<double> pb = eng.bathPopulations(q, t);
                    for (std::size_t i = 0; i < pb.size(); ++i)
                        for (std::size_t k = 0; k < pb.size(); ++k)
                            worst = std::max(worst, std::abs(b(i, k) - (i == k ? pb[i] : 0.0)));
                }
            }
        }
    report(2, worst < 1e-9, fmt("max deviation %.3g", worst), start);
}

void conservation() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RefrigeratorParams p;
    p.nBath = {10, 10, 10};
    for (int i = 0; i < 3; ++i) {
        p.epsilon[i] = 0.5 + 1.5 * u(rng);
        p.bathEnergy[i] = 0.5 + 3.5 * u(rng);
        p.coupling[i] = u(rng);
        p.beta[i] = 0.3 + u(rng);
    }
    p.g = 0.1 * u(rng);

    const Refrigerator pruned(p, 1e-12);
    const Refrigerator full(p, 0.0);
    std::array<double, 3> m0{};
    for (int q = 1; q <= 3; ++q)
        m0[q - 1] = full.expectation(Observable::SpinZ, q, 0.0) + full.expectation(Observable::BathZ, q, 0.0);
    const double e0 = full.expectation(Observable::Energy, 1, 0.0);
    double traceErr = 0.0, mDrift = 0.0, eDrift = 0.0, pruneShift = 0.0;
    for (int k = 0; k <= 40; ++k) {
        const double t = 0.25 * k;
        for (std::size_t s = 0; s < full.sectors().size(); ++s)
            traceErr = std::max(traceErr, std::abs(full.sectorState(s, t).trace() - 1.0));
        for (int q = 1; q <= 3; ++q) {
            const double m = full.expectation(Observable::SpinZ, q, t) + full.expectation(Observable::BathZ, q, t);
            mDrift = std::max(mDrift, std::abs(m - m0[q - 1]));
        }
        eDrift = std::max(eDrift, std::abs(full.expectation(Observable::Energy, 1, t) - e0));
        pruneShift = std::max(pruneShift, std::abs(pruned.reducedQubitState(1, t).groundPopulation -
                                                   full.reducedQubitState(1, t).groundPopulation));
    }
    const bool pass = traceErr < 1e-12 && mDrift < 1e-10 && eDrift < 1e-10 && pruneShift < 1e-10;
    char buf[256];
    std::snprintf(buf, sizeof buf, "trace %.2g, S+J drift %.2g, energy drift %.2g, pruning shift %.2g",
                  traceErr, mDrift, eDrift, pruneShift);
    report(3, pass, buf, start);
}

// ---------------------------------------------------------------------------

RefrigeratorParams atOptimum(const analysis::OptimizationResult& o, int n) {
    RefrigeratorParams p;
    p.nBath = {n, n, n};
    p.coupling = o.coupling;
    p.g = o.g;
    return p;
}

double minTemperature(const engine::TimeSeries& s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& lt : s.temperature)
        if (lt.isPositive()) best = std::min(best, lt.value);
    return best;
}

void transientCooling(const analysis::OptimizationResult& opt) {
    const auto start = Clock::now();
    const RefrigeratorParams p = atOptimum(opt, 30);
    const Refrigerator eng(p);
    const kernels::UniformGrid grid{0.0, 0.005, 2001};
    const double t2 = minTemperature(engine::temperature_series(eng, 2, grid));
    const double t3 = minTemperature(engine::temperature_series(eng, 3, grid));
    const bool pass = opt.bestT1 <= 0.55 && t2 < 1.0 / p.beta[1] && t3 < 1.0 / p.beta[2];
    char buf[256];
    std::snprintf(buf, sizeof buf, "min T1 %.4f at t=%.3f (A=%.3f,%.3f,%.3f g=%.4f), min T2 %.4f, min T3 %.4f",
                  opt.bestT1, opt.bestTime, opt.coupling[0], opt.coupling[1], opt.coupling[2], opt.g, t2, t3);
    report(4, pass, buf, start);
}

void heatCurrentSigns(const analysis::OptimizationResult& opt) {
    const auto start = Clock::now();
    const RefrigeratorParams p = atOptimum(opt, 30);
    const Refrigerator eng(p);
    const kernels::UniformGrid grid{0.0, 0.005, 2001};
    const engine::TimeSeries s1 = engine::temperature_series(eng, 1, grid);
    const thermo::HeatCurrentSeries q = thermo::heat_current_series(eng, grid);

    std::vector<double> times, t1;
    for (std::size_t k = 0; k < grid.count; ++k)
        if (s1.temperature[k].isPositive()) {
            times.push_back(grid.at(k));
            t1.push_back(s1.temperature[k].value);
        }
    const std::vector<double> dT = thermo::finite_difference(times, t1);
    std::size_t cooling = 0, agreeing = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (dT[j] >= 0.0) continue;
        const auto k = static_cast<std::size_t>(std::lround(times[j] / grid.step));
        ++cooling;
        if (q.qdotS[0][k] < 0.0 && q.qdotB[0][k] > 0.0) ++agreeing;
    }
    const double fraction = cooling ? static_cast<double>(agreeing) / static_cast<double>(cooling) : 0.0;

    std::size_t bestLen = 0, bestStart = 0, run = 0;
    for (std::size_t k = 0; k < grid.count; ++k) {
        const bool all = q.qdotB[0][k] > 0.0 && q.qdotB[1][k] > 0.0 && q.qdotB[2][k] > 0.0;
        run = all ? run + 1 : 0;
        if (run > bestLen) {
            bestLen = run;
            bestStart = k + 1 - run;
        }
    }
    const bool pass = cooling > 0 && fraction >= 0.95 && bestLen >= 2;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu cooling samples, %.1f%% with Qdot_S1<0 and Qdot_B1>0; all Qdot_B>0 on [%.3f, %.3f]",
                  cooling, 100.0 * fraction, grid.at(bestStart),
                  bestLen ? grid.at(bestStart + bestLen - 1) : grid.at(bestStart));
    report(5, pass, buf, start);
}

// ---------------------------------------------------------------------------

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

void scalingAsymptote(const analysis::ScalingReport& rep, bool quick) {
    const auto start = Clock::now();
    if (!rep.t1Neville) {
        report(6, false, "no Neville tableau", start);
        return;
    }
    const double nev = rep.t1Neville->extrapolated;
    const std::vector<double> d = rep.t1Neville->lowerDiagonalD();
    const double d14 = d.empty() ? 0.0 : d.front();
    if (quick) {
        report(6, within(nev, 0.457, 0.03), fmt("smoke: Neville over N<=14 gives %.4f", nev), start);
        return;
    }
    if (!rep.t1Fit) {
        report(6, false, "no power-law fit", start);
        return;
    }
    const analysis::FitResult& f = *rep.t1Fit;
    // "of order 2e-3": within a factor of ten either way
    const bool dOk = std::abs(d14) > 2e-4 && std::abs(d14) < 2e-2;
    const bool pass = within(f.tInf, 0.457, 0.01) && within(f.b, 1.089, 0.2) && within(nev, 0.454, 0.01) && dOk;
    char buf[256];
    std::snprintf(buf, sizeof buf, "fit tInf %.4f a %.4f b %.3f sigma %.2g; Neville %.4f, D_{1,4} %.3g", f.tInf, f.a,
                  f.b, f.sigma, nev, d14);
    report(6, pass, buf, start);
}

void timingScaling(const analysis::ScalingReport& rep) {
    const auto start = Clock::now();
    if (!rep.tlFit) {
        report(7, false, "no t_l fit", start);
        return;
    }
    const analysis::FitResult& f = *rep.tlFit;
    const bool pass = within(f.b, 0.62, 0.15) && within(f.tInf, 0.10, 0.05);
    char buf[256];
    std::snprintf(buf, sizeof buf, "t_l fit exponent %.3f, asymptote %.4f, a %.4f, sigma %.2g", f.b, f.tInf, f.a,
                  f.sigma);
    report(7, pass, buf, start);
}

void markovBaseline(const analysis::ScalingReport& rep, std::uint64_t seed) {
    const auto start = Clock::now();
    const markov::MarkovParams p;
    const markov::MarkovMinimum m = markov::markov_min_t1(p);
    const markov::MarkovRanges ranges;
    const markov::MarkovOptimum o = markov::markov_optimize(p, ranges, 2000, seed);

    bool advantage = !rep.rows.empty();
    double worstT1 = 0.0, worstTl = 0.0;
    for (const analysis::ScalingRow& row : rep.rows) {
        if (row.n < 2) continue;
        worstT1 = std::max(worstT1, row.optimum.bestT1);
        const double tl = row.firstMin ? row.firstMin->time : std::numeric_limits<double>::infinity();
        worstTl = std::max(worstTl, tl);
        advantage = advantage && row.optimum.bestT1 < 0.842 && tl < 15.2 / 2;
    }
    const bool valueOk = within(m.t1, 0.842, 0.01);
    const bool timeOk = within(m.time, 15.2, 0.5);
    const bool optOk = o.t1 <= 0.852;
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "fixed-parameter min T1 %.4f (%s) at t=%.3f (%s); optimized T1 %.4f (%s, %zu evals); "
                  "CSQAR worst T1 %.4f, worst t_l %.3f (%s)",
                  m.t1, valueOk ? "ok" : "off", m.time, timeOk ? "ok" : "off", o.t1, optOk ? "ok" : "off",
                  o.evaluations, worstT1, worstTl, advantage ? "ok" : "off");
    report(8, valueOk && timeOk && optOk && advantage, buf, start);
}

void nevilleUnit() {
    const auto start = Clock::now();
    const std::vector<double> xs{1.0 / 2, 1.0 / 4, 1.0 / 7, 1.0 / 14, 1.0 / 50};
    std::vector<double> lin;
    for (double x : xs) lin.push_back(0.45 + 1.3 * x);
    const analysis::NevilleTableau a = analysis::neville_extrapolate(xs, lin);
    double linErr = std::abs(a.extrapolated - 0.45);
    for (std::size_t m = 1; m < a.tableau.size(); ++m)
        for (double v : a.tableau[m]) linErr = std::max(linErr, std::abs(v - 0.45));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.4, 0.6);
    std::vector<double> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(u(rng));
    const analysis::NevilleTableau b = analysis::neville_extrapolate(xs, ys);
    double recErr = 0.0;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) recErr = std::max(recErr, std::abs(b.tableau[0][i] - ys[i]));
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) {
            const double parent = (-xs[i + m] * b.tableau[m - 1][i] + xs[i] * b.tableau[m - 1][i + 1]) /
                                  (xs[i] - xs[i + m]);
            recErr = std::max(recErr, std::abs(b.tableau[m][i] - parent));
            recErr = std::max(recErr, std::abs(b.dDiffs[m][i] - (b.tableau[m][i] - b.tableau[m - 1][i + 1])));
        }
    recErr = std::max(recErr, std::abs(b.extrapolated - b.tableau[n - 1][0]));
    report(9, linErr < 1e-12 && recErr < 1e-14, fmt("linear error %.2g, recursion error %.2g", linErr, recErr),
           start);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"csqar acceptance run"};
    bool quick = false;
    std::size_t budget = 2000;
    std::uint64_t seed = 1;
    app.add_flag("--quick", quick, "Reduced bath-size sweep (N <= 14)");
    app.add_option("--budget", budget, "Objective evaluations per optimization")->check(CLI::Range(100, 1000000));
    app.add_option("--seed", seed, "Optimizer seed");
    CLI11_PARSE(app, argc, argv);

    try {
        singleStarOracle();
        refrigeratorOracle();
        conservation();

        analysis::ScalingOptions options;
        options.optimizer.budget = budget;
        options.optimizer.seed = seed;
        std::vector<int> ns{2, 4, 7, 10, 14, 20, 30, 40, 50};
        if (quick) {
            ns = {2, 4, 7, 10, 14};
            options.nevilleNs = {2, 4, 7, 14};
        }
        const RefrigeratorParams base;

        // criteria 4 and 5 use the N = 30 optimum, which the full sweep already contains
        const auto sweepStart = Clock::now();
        analysis::ScalingReport rep = analysis::scaling_sweep(base, ns, options);
        const double sweepSeconds = std::chrono::duration<double>(Clock::now() - sweepStart).count();

        analysis::OptimizationResult at30;
        const auto row30 = std::find_if(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.n == 30; });
        if (row30 != rep.rows.end()) {
            at30 = row30->optimum;
        } else {
            const auto t0 = Clock::now();
            RefrigeratorParams p = base;
            p.nBath = {30, 30, 30};
            at30 = analysis::optimize_t1(p, options.ranges, options.optimizer, options.pruneTol);
            std::printf("  N=30 optimization %.1f s\n",
                        std::chrono::duration<double>(Clock::now() - t0).count());
        }
        transientCooling(at30);
        heatCurrentSigns(at30);

        for (const analysis::ScalingRow& row : rep.rows)
            std::printf("  N=%2d  T1opt %.4f at t=%.3f  t_l %.4f  (%zu evals)\n", row.n, row.optimum.bestT1,
                        row.optimum.bestTime, row.firstMin ? row.firstMin->time : -1.0, row.optimum.evaluations);
        for (const std::string& w : rep.warnings) std::printf("  warning: %s\n", w.c_str());
        std::printf("  sweep time %.1f s\n", sweepSeconds);

        scalingAsymptote(rep, quick);
        if (quick)
            std::printf("criterion 7: SKIP  needs the full sweep\n");
        else
            timingScaling(rep);
        markovBaseline(rep, seed);
        nevilleUnit();
    } catch (const std::exception& e) {
        std::printf("aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
