#include "csqar/analysis/time_minimum.hpp"

#include <cmath>

#include "csqar/error.hpp"

namespace csqar::analysis {

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol) {
    if (!(lo <= hi)) throw DomainError("golden_section: lo must not exceed hi");
    const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    ScalarMinimum best{lo, f(lo)};
    if (const double fh = f(hi); fh < best.value) best = {hi, fh};
    double a = lo, b = hi;
    double x1 = b - invPhi * (b - a), x2 = a + invPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invPhi * (b - a);
            f2 = f(x2);
        }
    }
    if (f1 < best.value) best = {x1, f1};
    if (f2 < best.value) best = {x2, f2};
    return best;
}

std::optional<LocalMinimum> first_local_min(std::span<const double> t, std::span<const double> v,
                                            const std::function<double(double)>& continuous) {
    if (t.size() != v.size()) throw DomainError("first_local_min: size mismatch");
    if (t.size() < 3) throw DomainError("first_local_min: need at least three points");
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        if (!(v[k] < v[k - 1] && v[k] <= v[k + 1])) continue;
        LocalMinimum m{k, t[k], v[k]};
        if (continuous) {
            const ScalarMinimum s = golden_section(continuous, t[k - 1], t[k + 1], 1e-9);
            if (s.value <= m.value) {
                m.time = s.x;
                m.value = s.value;
            }
        }
        return m;
    }
    return std::nullopt;
}

} // namespace csqar::analysis
