#pragma once

// y(N) = tInf + a N^{-b} with tInf held fixed.

#include <cstddef>
#include <span>

namespace csqar::analysis {

struct FitResult {
    double tInf = 0.0;
    double a = 0.0;
    double b = 0.0;
    double sigma = 0.0; ///< sqrt( sum (fit - data)^2 / (d - p) )
    std::size_t dataCount = 0;
    std::size_t paramCount = 2;
};

double power_law_value(double tInf, double a, double b, double n);

/// sqrt( sum_k (tInf + a n_k^{-b} - y_k)^2 / (d - 2) ).
double power_law_sigma(std::span<const double> n, std::span<const double> y, double tInf,
                       double a, double b);

/// Mean of the y values whose n >= nMin. Throws DomainError if there are none.
double asymptote_average(std::span<const double> n, std::span<const double> y, double nMin = 35);

/// Log-linear seed from the points with y > tInf, then Levenberg-Marquardt on the model
/// over all points. Throws DomainError for fewer than 4 points, non-positive n, or fewer
/// than two points above tInf.
FitResult fit_power_law(std::span<const double> n, std::span<const double> y, double tInf);

} // namespace csqar::analysis
