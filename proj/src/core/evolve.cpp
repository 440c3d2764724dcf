#include "csqar/core/evolve.hpp"

#include <cmath>

#include "csqar/error.hpp"

namespace csqar {

ComplexMatrix unitary_from_spectrum(const Spectrum& spectrum, double t) {
    const std::size_t n = spectrum.eigenvalues.size();
    const ComplexMatrix& v = spectrum.eigenvectors;
    ComplexMatrix vPhase(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::polar(1.0, -spectrum.eigenvalues[k] * t);
        for (std::size_t i = 0; i < n; ++i) vPhase(i, k) = v(i, k) * phase;
    }
    return vPhase * v.adjoint();
}

Propagator::Propagator(const ComplexMatrix& h) : spectrum_(eig_hermitian(h)) {}

ComplexMatrix Propagator::evolve(const ComplexMatrix& rho0, double t) const {
    const std::size_t n = spectrum_.eigenvalues.size();
    if (rho0.rows() != n || rho0.cols() != n)
        throw DomainError("evolve: density matrix dimension does not match the Hamiltonian");
    const ComplexMatrix u = unitary(t);
    return u * rho0 * u.adjoint();
}

ComplexMatrix evolve_density(const ComplexMatrix& h, const ComplexMatrix& rho0, double t) {
    if (!h.isSquare() || rho0.rows() != h.rows() || rho0.cols() != h.cols())
        throw DomainError("evolve_density: dimension mismatch");
    if (std::abs(rho0.trace() - Complex(1.0)) > 1e-10)
        throw DomainError("evolve_density: initial state does not have unit trace");
    return Propagator(h).evolve(rho0, t);
}

} // namespace csqar
