#pragma once

// One qubit (the central spin) coupled by an XY exchange to N bath spins in their
// symmetric Dicke sector:
//
//   H = eps S^z + E J^z + A (S^+ J^- + S^- J^+)
//
// S^z + J^z is conserved, so with m its eigenvalue the space splits into sectors
// spanned by |g>|m+1/2> and |e>|m-1/2> (g = spin down = ground). The two extreme
// sectors m = +-(N/2 + 1/2) hold a single state. Half-integers are carried doubled.

#include <complex>
#include <variant>
#include <vector>

#include "csqar/spinstar/local_temperature.hpp"

namespace csqar::spinstar {

struct SingleStarParams {
    double epsilon = 1.0;
    double bathEnergy = 2.0;
    double coupling = 0.5;
    int nBath = 1;
    double beta = 1.0;

    /// Throws DomainError unless nBath >= 1, coupling >= 0, beta > 0 and all values finite.
    void validate() const;
};

struct SectorLabel {
    int twiceM = 0;
    int dim = 2; ///< 1 for the two edge sectors

    double m() const noexcept { return twiceM / 2.0; }
};

/// m from -(N+1)/2 to (N+1)/2 in unit steps: N + 2 sectors, ascending.
std::vector<SectorLabel> enumerate_sectors(const SingleStarParams& p);

struct SectorHamiltonian2x2 {
    int twiceM = 0;
    double bMinus = 0.0; ///< energy of |g>|m+1/2>
    double bPlus = 0.0;  ///< energy of |e>|m-1/2>
    double u = 0.0;      ///< off-diagonal exchange element
    double theta = 0.0;  ///< sqrt(u^2 + (bMinus - bPlus)^2 / 4)
};

/// One-dimensional edge sector: a single stationary state.
struct EdgeSector {
    int twiceM = 0;
    double energy = 0.0;
    bool excited = false; ///< true for m = N/2 + 1/2 (state |e>|N/2>)
};

using SectorHamiltonian = std::variant<SectorHamiltonian2x2, EdgeSector>;

/// Throws DomainError if twiceM is not a sector of p.
SectorHamiltonian sector_hamiltonian(const SingleStarParams& p, int twiceM);

/// Sector density matrix in the basis (|g>|m+1/2>, |e>|m-1/2>).
struct SectorState {
    int twiceM = 0;
    double cGG = 0.0;
    double cEE = 0.0;
    std::complex<double> cGE{}; ///< <g,m+1/2| rho |e,m-1/2>; the (e,g) entry is its conjugate
};

/// Unitary evolution of the normalized thermal sector state, via the 2x2 eigendecomposition.
SectorState evolve_sector(const SingleStarParams& p, int twiceM, double t);

/// Closed-form sector populations and coherence (Rabi formula). Used as a cross-check.
SectorState evolve_sector_closed_form(const SingleStarParams& p, int twiceM, double t);

/// Normalized Boltzmann weight of every sector (same order as enumerate_sectors).
std::vector<double> sector_weights(const SingleStarParams& p);

struct SpinReducedState {
    double groundPopulation = 0.0;
    double time = 0.0;
};

/// Reduced state of the central spin at time t (diagonal; ground population r).
SpinReducedState reduced_spin_state(const SingleStarParams& p, double t);

/// d r / dt, exact: each sector contributes -2 u Im c_ge.
double spin_ground_rate(const SingleStarParams& p, double t);

/// Diagonal of the reduced bath state, indexed by m_B + N/2 = 0..N.
std::vector<double> reduced_bath_state(const SingleStarParams& p, double t);

} // namespace csqar::spinstar
