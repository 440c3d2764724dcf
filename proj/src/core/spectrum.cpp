#include "csqar/core/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csqar/error.hpp"

namespace csqar {
namespace {

constexpr int kMaxSweeps = 100;

// Rotation angle for the symmetric 2x2 block [[app, apq], [apq, aqq]] (apq > 0),
// chosen so that the smaller rotation is taken.
struct JacobiAngle {
    double c;
    double s;
    double t;
};

JacobiAngle jacobiAngle(double app, double aqq, double apq) {
    const double theta = (aqq - app) / (2.0 * apq);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    return {c, t * c, t};
}

} // namespace

Spectrum eig_hermitian(const ComplexMatrix& h, double hermitianTol) {
    if (!h.isSquare()) throw DomainError("eig_hermitian: matrix is not square");
    const std::size_t n = h.rows();
    const double scale = std::max(h.maxAbs(), 1.0);
    if (!h.isHermitian(hermitianTol * scale))
        throw DomainError("eig_hermitian: matrix of dimension " + std::to_string(n) +
                          " is not Hermitian");

    ComplexMatrix a = h;
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto offNorm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double target = 1e-15 * scale * static_cast<double>(std::max<std::size_t>(n, 1));
    bool converged = n <= 1;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (offNorm() <= target) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                if (mag < 1e-300 ||
                    (std::abs(app) + 1e3 * mag == std::abs(app) &&
                     std::abs(aqq) + 1e3 * mag == std::abs(aqq) && mag < 1e-18 * scale)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / mag; // e^{i phi}
                const auto [c, s, t] = jacobiAngle(app, aqq, mag);
                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                const Complex gpp = c;
                const Complex gpq = s;
                const Complex gqp = -s * std::conj(phase);
                const Complex gqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    if (!converged && offNorm() > target * 1e3)
        throw NumericalError("eig_hermitian: Jacobi sweeps did not converge for dimension " +
                             std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

SmallSpectrum eig_small_symmetric(const SmallSymmetric& h) {
    const std::size_t n = h.dim;
    SmallSymmetric a = h;
    SmallSpectrum out;
    out.dim = n;
    out.vectors.dim = n;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, i) = 1.0;

    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-16 * scale) break;
        if (sweep + 1 == kMaxSweeps)
            throw NumericalError("eig_small_symmetric: no convergence for dimension " +
                                 std::to_string(n));
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const auto [c, s, t] = jacobiAngle(a(p, p), a(q, q), apq);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = out.vectors(k, p);
                    const double vkq = out.vectors(k, q);
                    out.vectors(k, p) = c * vkp - s * vkq;
                    out.vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    // insertion sort, n <= 8
    std::array<std::size_t, SmallSymmetric::kMax> order{};
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    SmallSymmetric sorted;
    sorted.dim = n;
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) sorted(i, k) = out.vectors(i, order[k]);
    }
    out.vectors = sorted;
    return out;
}

} // namespace csqar
