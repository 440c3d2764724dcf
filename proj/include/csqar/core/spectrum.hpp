#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "csqar/core/complex_matrix.hpp"

namespace csqar {

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, orthonormal columns.
struct Spectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Cyclic complex Jacobi. Throws DomainError for non-Hermitian input and
/// NumericalError (carrying the dimension) if the sweeps fail to converge.
Spectrum eig_hermitian(const ComplexMatrix& h, double hermitianTol = 1e-12);

/// Real symmetric matrix of dimension <= 8 in a fixed buffer. This is the
/// shape of every sector Hamiltonian of the refrigerator.
struct SmallSymmetric {
    static constexpr std::size_t kMax = 8;
    std::size_t dim = 0;
    std::array<double, kMax * kMax> a{};

    double& operator()(std::size_t i, std::size_t j) noexcept { return a[i * kMax + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a[i * kMax + j]; }
};

/// Spectrum of a SmallSymmetric: values ascending, vectors stored column-wise (vectors(i,k)).
struct SmallSpectrum {
    std::size_t dim = 0;
    std::array<double, SmallSymmetric::kMax> values{};
    SmallSymmetric vectors;
};

/// Real cyclic Jacobi on a fixed-size buffer; no allocation.
SmallSpectrum eig_small_symmetric(const SmallSymmetric& h);

} // namespace csqar
