// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "csqar/kernels/phasor.hpp"

namespace csqar::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;
constexpr std::size_t kVectors = 4; // modes per pass = 16

struct Lanes {
    __m256d c, s, cw, sw, a, b;
};

} // namespace

void phasor_sum_avx2(const double* freq, const double* cosAmp, const double* sinAmp,
                     std::size_t nModes, const UniformGrid& grid, double* out) {
    constexpr std::size_t kBlock = kLanes * kVectors;
    const std::size_t nFull = nModes / kBlock * kBlock;

    alignas(32) double seedC[kBlock];
    alignas(32) double seedS[kBlock];
    alignas(32) double stepC[kBlock];
    alignas(32) double stepS[kBlock];

    for (std::size_t j0 = 0; j0 < nFull; j0 += kBlock) {
        for (std::size_t l = 0; l < kBlock; ++l) {
            stepC[l] = std::cos(freq[j0 + l] * grid.step);
            stepS[l] = std::sin(freq[j0 + l] * grid.step);
        }
        Lanes v[kVectors];
        for (std::size_t q = 0; q < kVectors; ++q) {
            v[q].cw = _mm256_load_pd(stepC + q * kLanes);
            v[q].sw = _mm256_load_pd(stepS + q * kLanes);
            v[q].a = _mm256_loadu_pd(cosAmp + j0 + q * kLanes);
            v[q].b = _mm256_loadu_pd(sinAmp + j0 + q * kLanes);
        }
        for (std::size_t k0 = 0; k0 < grid.count; k0 += kReseedInterval) {
            const std::size_t k1 = std::min(grid.count, k0 + kReseedInterval);
            const double t0 = grid.at(k0);
            for (std::size_t l = 0; l < kBlock; ++l) {
                seedC[l] = std::cos(freq[j0 + l] * t0);
                seedS[l] = std::sin(freq[j0 + l] * t0);
            }
            for (std::size_t q = 0; q < kVectors; ++q) {
                v[q].c = _mm256_load_pd(seedC + q * kLanes);
                v[q].s = _mm256_load_pd(seedS + q * kLanes);
            }
            for (std::size_t k = k0; k < k1; ++k) {
                __m256d acc = _mm256_setzero_pd();
                for (std::size_t q = 0; q < kVectors; ++q) {
                    acc = _mm256_fmadd_pd(v[q].a, v[q].c, acc);
                    acc = _mm256_fmadd_pd(v[q].b, v[q].s, acc);
                    const __m256d cn =
                        _mm256_fmsub_pd(v[q].c, v[q].cw, _mm256_mul_pd(v[q].s, v[q].sw));
                    v[q].s = _mm256_fmadd_pd(v[q].s, v[q].cw, _mm256_mul_pd(v[q].c, v[q].sw));
                    v[q].c = cn;
                }
                const __m128d lo = _mm256_castpd256_pd128(acc);
                const __m128d hi = _mm256_extractf128_pd(acc, 1);
                const __m128d pair = _mm_add_pd(lo, hi);
                out[k] += _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
            }
        }
    }
    if (nFull < nModes)
        phasor_sum_scalar(freq + nFull, cosAmp + nFull, sinAmp + nFull, nModes - nFull, grid,
                          out);
}

} // namespace csqar::kernels::detail
