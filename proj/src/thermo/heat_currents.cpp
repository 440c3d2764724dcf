#include "csqar/thermo/heat_currents.hpp"

#include "csqar/error.hpp"

namespace csqar::thermo {

using engine::Observable;

HeatCurrentSample heat_currents(const engine::Refrigerator& engine, double t) {
    if (t < 0.0) throw DomainError("heat_currents: t must be >= 0");
    HeatCurrentSample s;
    s.time = t;
    for (int q = 0; q < 3; ++q) {
        s.qdotS[q] = engine.rate(Observable::SystemEnergy, q + 1, t);
        s.qdotB[q] = engine.rate(Observable::BathEnergy, q + 1, t);
    }
    return s;
}

double EnergyFlows::total() const noexcept {
    double sum = interaction;
    for (int q = 0; q < 3; ++q) sum += system[q] + bath[q] + coupling[q];
    return sum;
}

EnergyFlows energy_flows(const engine::Refrigerator& engine, double t) {
    if (t < 0.0) throw DomainError("energy_flows: t must be >= 0");
    EnergyFlows f;
    for (int q = 0; q < 3; ++q) {
        f.system[q] = engine.rate(Observable::SystemEnergy, q + 1, t);
        f.bath[q] = engine.rate(Observable::BathEnergy, q + 1, t);
        f.coupling[q] = engine.rate(Observable::CouplingEnergy, q + 1, t);
    }
    f.interaction = engine.rate(Observable::Interaction, 1, t);
    return f;
}

double energy_balance(const engine::Refrigerator& engine, double t) {
    return energy_flows(engine, t).total();
}

HeatCurrentSeries heat_current_series(const engine::Refrigerator& engine,
                                      const kernels::UniformGrid& grid) {
    HeatCurrentSeries out;
    out.time.resize(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) out.time[k] = grid.at(k);
    for (int q = 0; q < 3; ++q) {
        out.qdotS[q] =
            kernels::evaluate_on_grid(engine.rateModes(Observable::SystemEnergy, q + 1), grid);
        out.qdotB[q] =
            kernels::evaluate_on_grid(engine.rateModes(Observable::BathEnergy, q + 1), grid);
    }
    return out;
}

std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("finite_difference: need two or more matching samples");
    const std::size_t n = x.size();
    std::vector<double> d(n);
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]);
    return d;
}

} // namespace csqar::thermo
