#include <algorithm>
#include <cmath>

#include "csqar/kernels/phasor.hpp"

namespace csqar::kernels::detail {

void phasor_sum_scalar(const double* freq, const double* cosAmp, const double* sinAmp,
                       std::size_t nModes, const UniformGrid& grid, double* out) {
    for (std::size_t j = 0; j < nModes; ++j) {
        const double w = freq[j];
        const double a = cosAmp[j];
        const double b = sinAmp[j];
        if (a == 0.0 && b == 0.0) continue;
        const double cw = std::cos(w * grid.step);
        const double sw = std::sin(w * grid.step);
        for (std::size_t k0 = 0; k0 < grid.count; k0 += kReseedInterval) {
            const std::size_t k1 = std::min(grid.count, k0 + kReseedInterval);
            double c = std::cos(w * grid.at(k0));
            double s = std::sin(w * grid.at(k0));
            for (std::size_t k = k0; k < k1; ++k) {
                out[k] += a * c + b * s;
                const double cn = c * cw - s * sw;
                s = s * cw + c * sw;
                c = cn;
            }
        }
    }
}

} // namespace csqar::kernels::detail
