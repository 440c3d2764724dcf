#pragma once

#include "csqar/core/complex_matrix.hpp"
#include "csqar/core/spectrum.hpp"

namespace csqar {

/// exp(-i h t) built from a precomputed spectrum.
ComplexMatrix unitary_from_spectrum(const Spectrum& spectrum, double t);

/// U rho0 U^dagger with U = exp(-i h t). Diagonalizes h on every call; use
/// Propagator when evaluating many times for the same h.
ComplexMatrix evolve_density(const ComplexMatrix& h, const ComplexMatrix& rho0, double t);

/// Diagonalize once, evolve at many times.
class Propagator {
public:
    explicit Propagator(const ComplexMatrix& h);

    const Spectrum& spectrum() const noexcept { return spectrum_; }
    ComplexMatrix unitary(double t) const { return unitary_from_spectrum(spectrum_, t); }
    ComplexMatrix evolve(const ComplexMatrix& rho0, double t) const;

private:
    Spectrum spectrum_;
};

} // namespace csqar
