#include "csqar/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "csqar/analysis/scaling.hpp"
#include "csqar/error.hpp"
#include "csqar/kernels/phasor.hpp"
#include "csqar/oracle/dense_model.hpp"
#include "csqar/thermo/heat_currents.hpp"

namespace csqar::cli {

using nlohmann::json;

std::string version() { return CSQAR_VERSION; }

std::string format_number(double v) {
    char buf[32];
    if (v == 0.0) v = 0.0; // no "-0"
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    void add(std::string name, std::vector<double> values) {
        names.push_back(std::move(name));
        columns.push_back(std::move(values));
    }
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json header(const RunConfig& c) { return {{"version", version()}, {"config", to_json(c)}}; }

std::string emit(const Table& table, const RunConfig& c) {
    if (c.output.format == OutputFormat::Json) {
        json j = header(c);
        json series = json::object();
        for (std::size_t k = 0; k < table.names.size(); ++k) {
            json col = json::array();
            for (double v : table.columns[k]) col.push_back(number(v));
            series[table.names[k]] = std::move(col);
        }
        j["columns"] = table.names;
        j["series"] = std::move(series);
        return j.dump(2) + "\n";
    }
    std::string s = "# csqar " + version() + "\n# config: " + to_json(c).dump() + "\n";
    for (std::size_t k = 0; k < table.names.size(); ++k)
        s += (k ? "," : "") + table.names[k];
    s += "\n";
    const std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < table.columns.size(); ++k) {
            if (k) s += ',';
            s += format_number(table.columns[k][r]);
        }
        s += '\n';
    }
    return s;
}

std::vector<double> gridTimes(const kernels::UniformGrid& grid) {
    std::vector<double> t(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) t[k] = grid.at(k);
    return t;
}

std::string runSingle(const RunConfig& c) {
    const auto& p = c.single;
    p.validate();
    const std::vector<double> times = gridTimes(c.timeGrid.grid());
    std::vector<double> temp, r, qs, qb;
    for (double t : times) {
        const double pop = spinstar::reduced_spin_state(p, t).groundPopulation;
        const double rate = spinstar::spin_ground_rate(p, t);
        r.push_back(pop);
        temp.push_back(spinstar::local_temperature(pop, p.epsilon).value);
        qs.push_back(-p.epsilon * rate);
        qb.push_back(p.bathEnergy * rate);
    }
    Table table;
    table.add("t", times);
    table.add("T", std::move(temp));
    table.add("r", std::move(r));
    table.add("Qdot_S", std::move(qs));
    table.add("Qdot_B", std::move(qb));
    return emit(table, c);
}

std::string runEvolve(const RunConfig& c) {
    const engine::Refrigerator eng(c.params, c.pruneTol);
    const kernels::UniformGrid grid = c.timeGrid.grid();
    Table table;
    table.add("t", gridTimes(grid));
    std::array<engine::TimeSeries, 3> series;
    for (int q = 1; q <= 3; ++q) series[q - 1] = engine::temperature_series(eng, q, grid);
    for (int q = 1; q <= 3; ++q) {
        std::vector<double> temp;
        for (const auto& lt : series[q - 1].temperature) temp.push_back(lt.value);
        table.add("T" + std::to_string(q), std::move(temp));
    }
    for (int q = 1; q <= 3; ++q)
        table.add("r" + std::to_string(q), series[q - 1].groundPopulation);
    thermo::HeatCurrentSeries heat = thermo::heat_current_series(eng, grid);
    for (int q = 1; q <= 3; ++q) table.add("Qdot_S" + std::to_string(q), std::move(heat.qdotS[q - 1]));
    for (int q = 1; q <= 3; ++q) table.add("Qdot_B" + std::to_string(q), std::move(heat.qdotB[q - 1]));
    return emit(table, c);
}

analysis::OptimizerOptions optimizerOptions(const RunConfig& c, std::size_t budget) {
    analysis::OptimizerOptions o;
    o.budget = budget;
    o.starts = c.optimization.starts;
    o.seed = c.optimization.seed;
    return o;
}

json optimumJson(const analysis::OptimizationResult& r) {
    return {{"coupling", r.coupling},         {"g", r.g},
            {"bestTime", r.bestTime},         {"bestT1", number(r.bestT1)},
            {"evaluations", r.evaluations},   {"restarts", r.restarts}};
}

json minimumJson(const std::optional<analysis::LocalMinimum>& m) {
    if (!m) return nullptr;
    return {{"time", m->time}, {"t1", number(m->value)}};
}

std::string runOptimize(const RunConfig& c) {
    c.params.validate();
    const auto& o = c.optimization;
    const analysis::OptimizationResult r =
        analysis::optimize_t1(c.params, o.ranges, optimizerOptions(c, o.budget), c.pruneTol);
    json j = header(c);
    j["result"] = optimumJson(r);
    j["firstMinimum"] = minimumJson(analysis::first_minimum_at(c.params, r, o.ranges.scan, c.pruneTol));
    json trace = json::array();
    for (double v : r.incumbent) trace.push_back(number(v));
    j["incumbent"] = std::move(trace);
    return j.dump(2) + "\n";
}

json fitJson(const std::optional<analysis::FitResult>& f) {
    if (!f) return nullptr;
    return {{"tInf", f->tInf},           {"a", f->a},
            {"b", f->b},                 {"sigma", f->sigma},
            {"dataCount", f->dataCount}, {"paramCount", f->paramCount}};
}

json nevilleJson(const std::optional<analysis::NevilleTableau>& n) {
    if (!n) return nullptr;
    return {{"h", n->xs},
            {"values", n->ys},
            {"target", n->target},
            {"tableau", n->tableau},
            {"differences", n->dDiffs},
            {"lowerDiagonalD", n->lowerDiagonalD()},
            {"extrapolated", n->extrapolated},
            {"stable", n->stable},
            {"warning", n->warning}};
}

std::string runScaling(const RunConfig& c) {
    c.params.validate();
    analysis::ScalingOptions options;
    options.optimizer = optimizerOptions(c, c.scaling.budget);
    options.ranges = c.optimization.ranges;
    options.pruneTol = c.pruneTol;
    options.nevilleNs = c.scaling.nevilleN;
    const analysis::ScalingReport rep = analysis::scaling_sweep(c.params, c.scaling.nList, options);

    json j = header(c);
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json item = optimumJson(row.optimum);
        item["n"] = row.n;
        item["firstMinimum"] = minimumJson(row.firstMin);
        rows.push_back(std::move(item));
    }
    j["rows"] = std::move(rows);
    j["t1Fit"] = fitJson(rep.t1Fit);
    j["t1Neville"] = nevilleJson(rep.t1Neville);
    j["tlFit"] = fitJson(rep.tlFit);
    j["tlNeville"] = nevilleJson(rep.tlNeville);
    j["warnings"] = rep.warnings;
    return j.dump(2) + "\n";
}

std::string runMarkov(const RunConfig& c) {
    const auto& m = c.markov;
    if (m.optimize) {
        const markov::MarkovOptimum r = markov::markov_optimize(
            m.params, m.ranges, m.budget, c.optimization.seed);
        json j = header(c);
        j["result"] = {{"alpha", r.params.alpha},       {"g", r.params.g},
                       {"time", r.time},                {"t1", number(r.t1)},
                       {"evaluations", r.evaluations},  {"restarts", r.restarts}};
        return j.dump(2) + "\n";
    }
    m.params.validate();
    const std::vector<double> times = gridTimes(c.timeGrid.grid());
    const markov::GkslSolution sol =
        markov::integrate_gksl(m.params, markov::thermal_product_state(m.params), times);
    const ComplexMatrix l = markov::liouvillian(m.params);

    std::array<std::vector<double>, 3> temp, r, qs;
    for (const ComplexMatrix& rho : sol.states) {
        // d rho / dt on the row-major vectorization
        ComplexMatrix v(64, 1);
        for (std::size_t k = 0; k < 64; ++k) v(k, 0) = rho.data()[k];
        const ComplexMatrix dv = l * v;
        ComplexMatrix drho(8, 8);
        for (std::size_t k = 0; k < 64; ++k) drho.data()[k] = dv(k, 0);
        for (int q = 1; q <= 3; ++q) {
            const double eps = m.params.epsilon[q - 1];
            const double pop = markov::ground_population(rho, q);
            r[q - 1].push_back(pop);
            temp[q - 1].push_back(spinstar::local_temperature(pop, eps).value);
            qs[q - 1].push_back(-eps * markov::ground_population(drho, q));
        }
    }
    Table table;
    table.add("t", times);
    for (int q = 1; q <= 3; ++q) table.add("T" + std::to_string(q), std::move(temp[q - 1]));
    for (int q = 1; q <= 3; ++q) table.add("r" + std::to_string(q), std::move(r[q - 1]));
    for (int q = 1; q <= 3; ++q) table.add("Qdot_S" + std::to_string(q), std::move(qs[q - 1]));
    return emit(table, c);
}

// Oracle comparison at a handful of times across the configured grid.
std::vector<double> checkTimes(const TimeGridConfig& g) {
    std::vector<double> t;
    for (int k = 0; k <= 10; ++k) t.push_back(g.start + (g.stop - g.start) * k / 10.0);
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

double diagonalDeviation(const ComplexMatrix& dense, const std::vector<double>& diag) {
    double dev = 0.0;
    for (std::size_t i = 0; i < dense.rows(); ++i)
        for (std::size_t k = 0; k < dense.cols(); ++k)
            dev = std::max(dev, std::abs(dense(i, k) - Complex(i == k ? diag[i] : 0.0)));
    return dev;
}

std::string runValidate(const RunConfig& c) {
    const std::vector<double> times = checkTimes(c.timeGrid);
    json checks = json::array();
    double worst = 0.0;
    auto record = [&](const std::string& name, double dev) {
        checks.push_back({{"name", name}, {"maxDeviation", dev}});
        worst = std::max(worst, dev);
    };

    {
        const auto& p = c.single;
        const oracle::DenseModel model = oracle::build_dense(p);
        double spin = 0.0, bath = 0.0;
        for (double t : times) {
            const ComplexMatrix rho = oracle::dense_evolve(model, t);
            const double r = spinstar::reduced_spin_state(p, t).groundPopulation;
            spin = std::max(spin, diagonalDeviation(oracle::partial_trace(rho, model.factorDims, 0),
                                                    {r, 1.0 - r}));
            bath = std::max(bath, diagonalDeviation(oracle::partial_trace(rho, model.factorDims, 1),
                                                    spinstar::reduced_bath_state(p, t)));
        }
        record("single.spin", spin);
        record("single.bath", bath);
    }

    const engine::Refrigerator eng(c.params, 0.0);
    const oracle::DenseModel model = oracle::build_dense(c.params);
    std::array<double, 3> qubit{}, bath{}, qdotS{}, qdotB{};
    std::array<ComplexMatrix, 3> sysOp, bathOp;
    for (int q = 1; q <= 3; ++q) {
        sysOp[q - 1] = oracle::dense_operator(model, c.params, engine::Observable::SystemEnergy, q);
        bathOp[q - 1] = oracle::dense_operator(model, c.params, engine::Observable::BathEnergy, q);
    }
    for (double t : times) {
        const ComplexMatrix rho = oracle::dense_evolve(model, t);
        const ComplexMatrix flow = commutatorFlow(model.hamiltonian, rho);
        const thermo::HeatCurrentSample heat = thermo::heat_currents(eng, t);
        for (int q = 1; q <= 3; ++q) {
            const double r = eng.reducedQubitState(q, t).groundPopulation;
            const ComplexMatrix dq =
                oracle::partial_trace(rho, model.factorDims, oracle::qubit_factor(q));
            const ComplexMatrix db =
                oracle::partial_trace(rho, model.factorDims, oracle::bath_factor(q));
            qubit[q - 1] = std::max(qubit[q - 1], diagonalDeviation(dq, {r, 1.0 - r}));
            bath[q - 1] = std::max(bath[q - 1], diagonalDeviation(db, eng.bathPopulations(q, t)));
            const double s = (flow * sysOp[q - 1]).trace().real();
            const double b = (flow * bathOp[q - 1]).trace().real();
            qdotS[q - 1] = std::max(qdotS[q - 1], std::abs(s - heat.qdotS[q - 1]));
            qdotB[q - 1] = std::max(qdotB[q - 1], std::abs(b - heat.qdotB[q - 1]));
        }
    }
    for (int q = 1; q <= 3; ++q) {
        const std::string i = std::to_string(q);
        record("refrigerator.qubit" + i, qubit[q - 1]);
        record("refrigerator.bath" + i, bath[q - 1]);
        record("refrigerator.qdotS" + i, qdotS[q - 1]);
        record("refrigerator.qdotB" + i, qdotB[q - 1]);
    }

    json j = header(c);
    j["times"] = times;
    j["checks"] = std::move(checks);
    j["maxDeviation"] = worst;
    j["tolerance"] = kValidateTolerance;
    j["pass"] = worst < kValidateTolerance;
    return j.dump(2) + "\n";
}

} // namespace

RunConfig resolve(RunConfig config) {
    if (config.couplingsFrom.empty()) return config;
    const std::string path = config.couplingsFrom;
    std::ifstream in(path);
    if (!in) throw ConfigError("params.couplingsFrom", "cannot open '" + path + "'");
    try {
        const json report = json::parse(in);
        const json& r = report.at("result");
        config.params.coupling = r.at("coupling").get<std::array<double, 3>>();
        config.params.g = r.at("g").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError("params.couplingsFrom",
                          "'" + path + "' is not an optimize report: " + e.what());
    }
    config.couplingsFrom.clear();
    return config;
}

std::string execute(const RunConfig& c) {
    switch (c.mode) {
    case Mode::Single: return runSingle(c);
    case Mode::Evolve: return runEvolve(c);
    case Mode::Optimize: return runOptimize(c);
    case Mode::Scaling: return runScaling(c);
    case Mode::Markov: return runMarkov(c);
    case Mode::Validate: return runValidate(c);
    }
    throw DomainError("unknown mode");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig resolved = resolve(config);
        const std::string text = execute(resolved);
        if (resolved.output.path.empty()) {
            out << text;
        } else {
            std::ofstream file(resolved.output.path, std::ios::binary);
            if (!file) throw ConfigError("output.path", "cannot write '" + resolved.output.path + "'");
            file << text;
        }
        if (resolved.mode == Mode::Validate && !json::parse(text).at("pass").get<bool>()) {
            err << "validate: oracle deviation above " << format_number(kValidateTolerance) << "\n";
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace csqar::cli
