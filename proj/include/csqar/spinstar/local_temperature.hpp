#pragma once

namespace csqar::spinstar {

enum class TemperatureKind {
    Positive, ///< r > 1/2
    Infinite, ///< r == 1/2
    Inverted, ///< r < 1/2: population inversion, negative temperature
};

struct LocalTemperature {
    double value = 0.0; ///< +inf for Infinite
    TemperatureKind kind = TemperatureKind::Positive;

    bool isPositive() const noexcept { return kind == TemperatureKind::Positive; }
};

/// T = eps / ln(r / (1 - r)) for a qubit with splitting eps and ground population r.
/// Throws DomainError unless 0 < r < 1.
LocalTemperature local_temperature(double groundPopulation, double epsilon);

/// Ground population of a qubit in equilibrium at inverse temperature beta.
double thermal_ground_population(double epsilon, double beta);

} // namespace csqar::spinstar
