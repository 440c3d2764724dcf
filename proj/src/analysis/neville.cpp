#include "csqar/analysis/neville.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "csqar/error.hpp"

namespace csqar::analysis {

double neville_combine(double x, double xi, double xim, double left, double right) {
    return ((x - xim) * left + (xi - x) * right) / (xi - xim);
}

std::vector<double> NevilleTableau::lowerDiagonalD() const {
    std::vector<double> chain;
    const std::size_t n = xs.size();
    for (std::size_t m = 1; m < n; ++m) chain.push_back(dDiffs[m][n - 1 - m]);
    return chain;
}

NevilleTableau neville_extrapolate(std::span<const double> xs, std::span<const double> ys,
                                   double target) {
    if (xs.size() != ys.size()) throw DomainError("neville_extrapolate: size mismatch");
    if (xs.empty()) throw DomainError("neville_extrapolate: no points");
    const std::size_t n = xs.size();
    double minGap = std::numeric_limits<double>::infinity();
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        nearest = std::min(nearest, std::abs(xs[i] - target));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = std::abs(xs[i] - xs[j]);
            if (gap == 0.0) throw DomainError("neville_extrapolate: duplicate x value");
            minGap = std::min(minGap, gap);
        }
    }

    NevilleTableau t;
    t.xs.assign(xs.begin(), xs.end());
    t.ys.assign(ys.begin(), ys.end());
    t.target = target;
    t.tableau.assign(n, {});
    t.dDiffs.assign(n, {});
    t.tableau[0] = t.ys;
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            const double p = neville_combine(target, xs[i], xs[i + m], t.tableau[m - 1][i],
                                             t.tableau[m - 1][i + 1]);
            t.tableau[m].push_back(p);
            t.dDiffs[m].push_back(p - t.tableau[m - 1][i + 1]);
        }
    }
    t.extrapolated = t.tableau[n - 1][0];
    if (n > 1 && !(minGap > 2.0 * nearest)) {
        t.stable = false;
        std::ostringstream msg;
        msg << "extrapolation may be unstable: smallest gap " << minGap
            << " does not exceed 2 * " << nearest << " (the distance from the target to the nearest point)";
        t.warning = msg.str();
    }
    return t;
}

} // namespace csqar::analysis
