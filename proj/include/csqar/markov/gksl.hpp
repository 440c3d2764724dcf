#pragma once

// Three-qubit absorption refrigerator with Markovian bosonic baths, described by a
// global GKSL master equation.
//
// Computational basis |q1 q2 q3>, index q1*4 + q2*2 + q3, with q = 0 the EXCITED level
// (sigma^z = +1) and q = 1 the ground level. In this convention the listed jump
// operators lower the energy, e.g. L_1^{eps1} = |111><011| + |100><000|.
//
//   H = sum_i eps_i sigma^z_i / 2 + g ( |010><101| + |101><010| )

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csqar/core/complex_matrix.hpp"

namespace csqar::markov {

struct MarkovParams {
    std::array<double, 3> epsilon{1.0, 2.0, 1.0};
    double g = 0.0999197;
    std::array<double, 3> alpha{7.98e-6, 2.67e-5, 3.13e-5};
    double cutoff = 1000.0;
    std::array<double, 3> beta{1.0, 1.0, 0.5};

    /// Throws DomainError for non-finite values, eps_i <= 0, g < 0, alpha_i < 0,
    /// cutoff <= 0, beta_i <= 0, or when the weak-coupling ratio reaches 0.1.
    void validate() const;
};

/// Ohmic spectral density alpha w exp(-w / cutoff).
double ohmic_density(double alpha, double omega, double cutoff);
/// Bose-Einstein occupation 1 / (exp(beta w) - 1).
double bose_einstein(double omega, double beta);
/// J(w)(1 + f(w)) for w > 0, J(|w|) f(|w|) for w < 0.
double decay_rate(double alpha, double omega, double cutoff, double beta);

struct JumpChannel {
    int qubitIndex = 1;     ///< 1..3
    double frequency = 0.0; ///< negative for the absorption (adjoint) channels
    ComplexMatrix op;       ///< 8x8
    double rate = 0.0;
};

/// For each qubit: the channels at eps_i, eps_i + g, eps_i - g, each followed by its
/// adjoint at the negative frequency. 18 channels in total.
std::vector<JumpChannel> build_jump_channels(const MarkovParams& p);

/// max gamma over all channels divided by min(eps_i, g); g = 0 uses min eps_i.
double weak_coupling_ratio(const MarkovParams& p);
/// Ratio above which a warning is attached to results.
inline constexpr double kWeakCouplingWarn = 0.01;
/// Ratio at which validate() rejects the parameters.
inline constexpr double kWeakCouplingLimit = 0.1;

ComplexMatrix system_hamiltonian(const MarkovParams& p);
/// Product of the qubits' thermal states at beta_i.
ComplexMatrix thermal_product_state(const MarkovParams& p);
/// Ground population of qubit 1..3.
double ground_population(const ComplexMatrix& rho, int qubit);

/// Dense 64x64 generator acting on the row-major vectorization of rho.
ComplexMatrix liouvillian(const MarkovParams& p);

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initialStep = 0.1;
    double maxStep = 5.0;
};

struct GkslDiagnostics {
    std::size_t acceptedSteps = 0;
    std::size_t rejectedSteps = 0;
    double maxTraceError = 0.0;       ///< max |Tr rho - 1| over accepted steps
    double maxHermiticityError = 0.0; ///< max |rho - rho^dagger| over accepted steps
    std::vector<std::string> warnings;
};

struct GkslSolution {
    std::vector<double> time;
    std::vector<ComplexMatrix> states;
    GkslDiagnostics diagnostics;
};

/// Dormand-Prince 5(4) with step control, landing exactly on every grid time.
/// Throws NumericalError naming the time if the step size underflows.
GkslSolution integrate_gksl(const MarkovParams& p, const ComplexMatrix& initialState,
                            const std::vector<double>& timeGrid,
                            const IntegratorOptions& options = {});

struct MarkovScan {
    double tMax = 40.0;
    double step = 0.25;
};

struct MarkovMinimum {
    double time = 0.0;
    double t1 = 0.0;
    std::vector<std::string> warnings;
};

/// min_t T1(t) over [0, tMax] starting from the thermal product state: grid scan,
/// then golden-section refinement between the neighbours of the best grid point.
/// Points with r1 <= 1/2 are skipped. Returns t1 = +inf if none qualifies.
MarkovMinimum markov_min_t1(const MarkovParams& p, const MarkovScan& scan = {});

struct MarkovRanges {
    std::array<double, 3> alphaLow{0.0, 0.0, 0.0};
    std::array<double, 3> alphaHigh{1e-4, 1e-4, 1e-4};
    double gLow = 0.01;
    double gHigh = 0.1;
    double tMax = 40.0;
    double scanStep = 0.25;
};

struct MarkovOptimum {
    MarkovParams params;
    double time = 0.0;
    double t1 = 0.0;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
};

/// Minimizes T1 over (alpha_1..3, g) inside the ranges, time by scan.
/// eps, cutoff and beta are taken from `base`.
MarkovOptimum markov_optimize(const MarkovParams& base, const MarkovRanges& ranges,
                              std::size_t budget, std::uint64_t seed, std::size_t threads = 0);

} // namespace csqar::markov
