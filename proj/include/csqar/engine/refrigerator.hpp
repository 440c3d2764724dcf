#pragma once

// Three qubits S1 (cold), S2 (room), S3 (hot), each the centre of its own spin-star
// bath, coupled by the six-body term
//
//   H_int = g ( |e g e><g e g| + h.c. )   (bath ladders moved along with each qubit flip)
//
// S^z_i + J^z_i is conserved for every i, so the dynamics splits into sectors
// (m1, m2, m3) of dimension <= 8. Inside a sector the basis is ordered canonically by
// the bit pattern b1 b2 b3 (index b1*4 + b2*2 + b3), b_i = 0 for the ground branch
// |g>|m_i+1/2> and 1 for the excited branch |e>|m_i-1/2>. States that do not exist on
// an edge sector are skipped, keeping the order of the rest.
//
// Qubits and baths are numbered 1..3 in this API.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csqar/core/complex_matrix.hpp"
#include "csqar/core/spectrum.hpp"
#include "csqar/kernels/phasor.hpp"
#include "csqar/spinstar/local_temperature.hpp"
#include "csqar/spinstar/single_star.hpp"

namespace csqar::engine {

struct RefrigeratorParams {
    std::array<double, 3> epsilon{1.0, 2.0, 1.0};
    std::array<double, 3> bathEnergy{2.0, 4.0, 2.0};
    std::array<double, 3> coupling{0.5, 0.5, 0.5};
    double g = 0.05;
    std::array<int, 3> nBath{30, 30, 30};
    std::array<double, 3> beta{1.0, 1.0, 0.5};

    /// Throws DomainError unless N_i >= 1, A_i >= 0, g >= 0, beta_i > 0 and all finite.
    void validate() const;
    /// E2 - eps2 == (E1 - eps1) + (E3 - eps3) within tol.
    bool isAutonomous(double tol = 1e-12) const;
    /// The spin star of qubit i (1..3) on its own.
    spinstar::SingleStarParams star(int qubit) const;
};

/// The two basis states joined by H_int, as canonical indices.
inline constexpr std::uint8_t kInteractionLow = 2;  // g e g
inline constexpr std::uint8_t kInteractionHigh = 5; // e g e

struct TripleSectorLabel {
    std::array<int, 3> twiceM{};
    std::array<int, 3> localDim{};
    double logWeight = 0.0; ///< log of the unnormalized Boltzmann weight of the whole sector
    double weight = 0.0;    ///< normalized over all sectors (before pruning)

    std::size_t dim() const noexcept {
        return static_cast<std::size_t>(localDim[0] * localDim[1] * localDim[2]);
    }
};

struct SectorEnumeration {
    std::vector<TripleSectorLabel> labels; ///< retained labels, lexicographic in (m1, m2, m3)
    std::size_t totalCount = 0;            ///< (N1+2)(N2+2)(N3+2)
    double retainedWeight = 1.0;
};

/// All sectors, then the smallest weights dropped while the dropped fraction stays
/// below pruneTol. pruneTol = 0 keeps everything.
SectorEnumeration enumerate_triple_sectors(const RefrigeratorParams& p, double pruneTol);

struct TripleSectorSystem {
    TripleSectorLabel label;
    std::array<std::uint8_t, 8> states{}; ///< canonical index of each basis state
    SmallSymmetric hamiltonian;
    SmallSpectrum spectrum;
    std::array<double, 8> initialPopulations{}; ///< unit trace

    std::size_t dim() const noexcept { return hamiltonian.dim; }
    /// Position of a canonical index in this sector, or -1.
    int find(std::uint8_t canonical) const noexcept;
    ComplexMatrix hamiltonianMatrix() const;
    ComplexMatrix initialState() const;
};

/// Sector Hamiltonian, its spectrum and its normalized initial product state.
TripleSectorSystem build_sector_hamiltonian(const RefrigeratorParams& p,
                                            const TripleSectorLabel& label);
ComplexMatrix initial_sector_state(const RefrigeratorParams& p, const TripleSectorLabel& label);

/// Sector-restricted operators. `qubit` is ignored for Interaction and Energy.
enum class Observable {
    GroundPopulation, ///< projector on the ground state of qubit i
    SpinZ,            ///< S^z_i
    BathZ,            ///< J^z_i
    SystemEnergy,     ///< eps_i S^z_i
    BathEnergy,       ///< E_i J^z_i
    CouplingEnergy,   ///< A_i (S^+_i J^-_i + h.c.)
    Interaction,      ///< H_int
    Energy,           ///< the full Hamiltonian
};

SmallSymmetric sector_operator(const RefrigeratorParams& p, const TripleSectorSystem& sys,
                               Observable o, int qubit);

struct ReducedQubitState {
    int qubitIndex = 1;
    double groundPopulation = 0.0;
    double time = 0.0;
};

/// Immutable after construction; all queries are const and thread-safe.
class Refrigerator {
public:
    /// threads = 0 uses default_thread_count().
    explicit Refrigerator(const RefrigeratorParams& p, double pruneTol = 1e-12,
                          std::size_t threads = 0);
    /// Reuses an enumeration (weights depend only on eps, E, beta and N).
    Refrigerator(const RefrigeratorParams& p, const SectorEnumeration& sectors,
                 double pruneTol, std::size_t threads = 0);

    const RefrigeratorParams& params() const noexcept { return params_; }
    double pruneTol() const noexcept { return pruneTol_; }
    std::span<const TripleSectorSystem> sectors() const noexcept { return systems_; }
    std::size_t totalSectorCount() const noexcept { return totalCount_; }
    double retainedWeight() const noexcept { return retainedWeight_; }
    /// Weight of sector s in every reduction: its label weight over the retained weight.
    double reductionWeight(std::size_t s) const noexcept { return reductionWeights_[s]; }

    /// Full sector density matrix (unit trace) at time t.
    ComplexMatrix sectorState(std::size_t s, double t) const;

    /// Weighted Tr[rho(t) O].
    double expectation(Observable o, int qubit, double t) const;
    /// Weighted Tr[-i[H, rho(t)] O], the exact time derivative of expectation().
    double rate(Observable o, int qubit, double t) const;

    ReducedQubitState reducedQubitState(int qubit, double t) const;
    /// Populations of bath `bath`, indexed by m_B + N/2 = 0..N.
    std::vector<double> bathPopulations(int bath, double t) const;

    /// expectation(o, qubit, t) as constant + sum of cosines over the sector Bohr frequencies.
    kernels::ModeSet modes(Observable o, int qubit) const;
    /// The time derivative of modes(o, qubit).
    kernels::ModeSet rateModes(Observable o, int qubit) const;

private:
    void build(const SectorEnumeration& sectors, std::size_t threads);

    RefrigeratorParams params_;
    double pruneTol_ = 0.0;
    std::size_t threads_ = 1;
    std::size_t totalCount_ = 0;
    double retainedWeight_ = 1.0;
    std::vector<TripleSectorSystem> systems_;
    std::vector<double> reductionWeights_;
    // V^T diag(p0) V per sector, shared by every observable
    std::vector<SmallSymmetric> rotatedInitial_;
};

struct TimeSeries {
    int qubitIndex = 1;
    std::vector<double> time;
    std::vector<double> groundPopulation;
    std::vector<spinstar::LocalTemperature> temperature;
};

/// r_i(t) and T_i(t) on a uniform grid (phasor kernel).
TimeSeries temperature_series(const Refrigerator& engine, int qubit,
                              const kernels::UniformGrid& grid);
/// Same on arbitrary strictly increasing times.
TimeSeries temperature_series(const Refrigerator& engine, int qubit,
                              std::span<const double> times);

} // namespace csqar::engine
