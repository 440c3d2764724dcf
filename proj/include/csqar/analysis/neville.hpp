#pragma once

// Neville's polynomial tableau evaluated at a target abscissa (usually h = 0).
//
//   P_{i..i+m} = ( (x - x_{i+m}) P_{i..i+m-1} + (x_i - x) P_{i+1..i+m} ) / (x_i - x_{i+m})
//   D_{m,i}    = P_{i..i+m} - P_{i+1..i+m}

#include <span>
#include <string>
#include <vector>

namespace csqar::analysis {

struct NevilleTableau {
    std::vector<double> xs;
    std::vector<double> ys;
    double target = 0.0;
    /// tableau[m][i] = P_{i..i+m}, 0-based i, m = 0..n-1.
    std::vector<std::vector<double>> tableau;
    /// dDiffs[m][i] = D_{m,i} for m >= 1 (dDiffs[0] is empty).
    std::vector<std::vector<double>> dDiffs;
    double extrapolated = 0.0;
    bool stable = true;
    std::string warning;

    /// D along the lower diagonal towards the apex: D_{1,n-1}, D_{2,n-2}, ..., D_{n-1,1}
    /// (1-based second index, as in the usual tableau notation).
    std::vector<double> lowerDiagonalD() const;
};

/// One step of the recursion, exposed for independent recomputation.
double neville_combine(double x, double xi, double xim, double left, double right);

/// Throws DomainError for fewer than one point, size mismatch or duplicate x.
/// The stability condition (smallest pairwise gap > 2 * distance from target to the
/// nearest x) only sets `stable` and `warning`.
NevilleTableau neville_extrapolate(std::span<const double> xs, std::span<const double> ys,
                                   double target = 0.0);

} // namespace csqar::analysis
