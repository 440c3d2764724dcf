#pragma once

// Brute-force reference: the full Hamiltonian on qubit (x) Dicke ladder for every
// qubit-bath pair, evolved with a Taylor scaling-and-squaring matrix exponential and
// reduced by explicit partial traces. Shares no code path with the sector engines
// beyond the matrix type.
//
// Pair basis: index s * (N + 1) + k with s = 0 ground, 1 excited, k = m_B + N/2.
// Refrigerator basis: pair1 (x) pair2 (x) pair3.

#include <cstddef>
#include <vector>

#include "csqar/core/complex_matrix.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/spinstar/single_star.hpp"

namespace csqar::oracle {

inline constexpr std::size_t kMaxDimension = 1000;

struct DenseModel {
    std::vector<std::size_t> factorDims; ///< {2, N+1} or {2, N1+1, 2, N2+1, 2, N3+1}
    ComplexMatrix hamiltonian;
    ComplexMatrix initialState;

    std::size_t dimension() const noexcept { return hamiltonian.rows(); }
};

/// Factor index of qubit / bath i (1-based) in factorDims.
constexpr std::size_t qubit_factor(int i) { return 2 * static_cast<std::size_t>(i - 1); }
constexpr std::size_t bath_factor(int i) { return 2 * static_cast<std::size_t>(i - 1) + 1; }

/// Throws DomainError naming the required dimension when it exceeds kMaxDimension.
DenseModel build_dense(const spinstar::SingleStarParams& p);
DenseModel build_dense(const engine::RefrigeratorParams& p);

/// exp(-i h t) by scaling and squaring of a truncated Taylor series.
ComplexMatrix expm_taylor(const ComplexMatrix& h, double t);

/// rho(t) = U rho0 U^dagger.
ComplexMatrix dense_evolve(const DenseModel& model, double t);

/// Trace over every factor except `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& factorDims,
                            std::size_t keep);

ComplexMatrix dense_evolve_and_trace(const DenseModel& model, double t, std::size_t keepFactor);

/// Local operators on the dense space, indexed like engine::Observable (qubit 1..3;
/// pass 1 for the single star).
ComplexMatrix dense_operator(const DenseModel& model, const engine::RefrigeratorParams& p,
                             engine::Observable o, int qubit);
ComplexMatrix dense_operator(const DenseModel& model, const spinstar::SingleStarParams& p,
                             engine::Observable o);

/// Tr[rho(t) O].
double dense_expectation(const DenseModel& model, const ComplexMatrix& op, double t);
/// Central difference of dense_expectation with step h.
double dense_rate(const DenseModel& model, const ComplexMatrix& op, double t, double h = 1e-5);

} // namespace csqar::oracle
