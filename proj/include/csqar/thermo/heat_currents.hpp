#pragma once

// Heat currents of the refrigerator: the rate of change of each qubit's and each
// bath's local energy, taken from the exact commutator -i[H, rho] sector by sector.

#include <array>
#include <vector>

#include "csqar/engine/refrigerator.hpp"
#include "csqar/kernels/phasor.hpp"

namespace csqar::thermo {

struct HeatCurrentSample {
    double time = 0.0;
    std::array<double, 3> qdotS{}; ///< d/dt <eps_i S^z_i>
    std::array<double, 3> qdotB{}; ///< d/dt <E_i J^z_i>
};

HeatCurrentSample heat_currents(const engine::Refrigerator& engine, double t);

/// Every energy channel of d<H>/dt. The coupling terms are A_i (S^+ J^- + h.c.).
struct EnergyFlows {
    std::array<double, 3> system{};
    std::array<double, 3> bath{};
    std::array<double, 3> coupling{};
    double interaction = 0.0;

    double total() const noexcept;
};

EnergyFlows energy_flows(const engine::Refrigerator& engine, double t);

/// Sum of all energy flows; zero up to rounding for the closed evolution.
double energy_balance(const engine::Refrigerator& engine, double t);

struct HeatCurrentSeries {
    std::vector<double> time;
    std::array<std::vector<double>, 3> qdotS;
    std::array<std::vector<double>, 3> qdotB;
};

/// All six currents on a uniform grid through the phasor kernel.
HeatCurrentSeries heat_current_series(const engine::Refrigerator& engine,
                                      const kernels::UniformGrid& grid);

/// Central differences (one-sided at the ends) of y on the times x.
std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y);

} // namespace csqar::thermo
