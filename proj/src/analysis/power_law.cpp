#include "csqar/analysis/power_law.hpp"

#include <cmath>
#include <vector>

#include "csqar/error.hpp"

namespace csqar::analysis {

double power_law_value(double tInf, double a, double b, double n) {
    return tInf + a * std::pow(n, -b);
}

double power_law_sigma(std::span<const double> n, std::span<const double> y, double tInf,
                       double a, double b) {
    if (n.size() != y.size() || n.size() < 3)
        throw DomainError("power_law_sigma: need three or more matching points");
    double ss = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double r = power_law_value(tInf, a, b, n[k]) - y[k];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(n.size() - 2));
}

double asymptote_average(std::span<const double> n, std::span<const double> y, double nMin) {
    if (n.size() != y.size()) throw DomainError("asymptote_average: size mismatch");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < n.size(); ++k)
        if (n[k] >= nMin) {
            sum += y[k];
            ++count;
        }
    if (count == 0)
        throw DomainError("asymptote_average: no point with N >= " + std::to_string(nMin));
    return sum / static_cast<double>(count);
}

namespace {

double sumSquares(std::span<const double> n, std::span<const double> y, double tInf, double a,
                  double b) {
    double ss = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        const double r = power_law_value(tInf, a, b, n[k]) - y[k];
        ss += r * r;
    }
    return ss;
}

} // namespace

FitResult fit_power_law(std::span<const double> n, std::span<const double> y, double tInf) {
    if (n.size() != y.size()) throw DomainError("fit_power_law: size mismatch");
    if (n.size() < 4) throw DomainError("fit_power_law: need at least 4 points");
    if (!std::isfinite(tInf)) throw DomainError("fit_power_law: tInf must be finite");

    // seed: ln(y - tInf) = ln a - b ln n over the points above the asymptote
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (!(n[k] > 0.0)) throw DomainError("fit_power_law: N must be positive");
        if (!(y[k] > tInf)) continue;
        const double lx = std::log(n[k]), ly = std::log(y[k] - tInf);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) throw DomainError("fit_power_law: fewer than two values above tInf");
    const double det = m * sxx - sx * sx;
    if (det == 0.0) throw DomainError("fit_power_law: all N above tInf coincide");
    const double slope = (m * sxy - sx * sy) / det;
    double a = std::exp((sy - slope * sx) / m);
    double b = -slope;

    // Levenberg-Marquardt on (a, b)
    double lambda = 1e-3;
    double ss = sumSquares(n, y, tInf, a, b);
    for (int iter = 0; iter < 500; ++iter) {
        double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double p = std::pow(n[k], -b);
            const double r = tInf + a * p - y[k];
            const double da = p;
            const double db = -a * std::log(n[k]) * p;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        bool improved = false;
        while (lambda < 1e12) {
            const double A = jaa * (1.0 + lambda), B = jab, D = jbb * (1.0 + lambda);
            const double dt = A * D - B * B;
            const double stepA = -(D * ga - B * gb) / dt;
            const double stepB = -(A * gb - B * ga) / dt;
            const double ssNew = sumSquares(n, y, tInf, a + stepA, b + stepB);
            if (ssNew <= ss) {
                const bool tiny = std::abs(stepA) <= 1e-15 * (1.0 + std::abs(a)) &&
                                  std::abs(stepB) <= 1e-15 * (1.0 + std::abs(b));
                a += stepA;
                b += stepB;
                const double drop = ss - ssNew;
                ss = ssNew;
                lambda = std::max(lambda / 10.0, 1e-12);
                improved = !tiny && drop > 1e-30 * (1.0 + ss);
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }

    FitResult out;
    out.tInf = tInf;
    out.a = a;
    out.b = b;
    out.dataCount = n.size();
    out.sigma = power_law_sigma(n, y, tInf, a, b);
    return out;
}

} // namespace csqar::analysis
