#pragma once

// Phasor sums over a uniform time grid:
//
//   out[k] += sum_j  cosAmp[j] * cos(freq[j] * t_k) + sinAmp[j] * sin(freq[j] * t_k),
//   t_k = start + k * step.
//
// Every time series the engine emits (populations, heat currents, energies) is a
// sum of this form, so this loop is where the scan time goes. The phase is advanced
// by a rotation recurrence and re-seeded from std::cos/std::sin every kReseedInterval
// steps, which keeps the drift at the 1e-14 level over thousands of steps.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace csqar::kernels {

inline constexpr std::size_t kReseedInterval = 64;

struct UniformGrid {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    double at(std::size_t k) const noexcept { return start + static_cast<double>(k) * step; }
};

/// Structure-of-arrays list of oscillating modes plus a constant offset.
struct ModeSet {
    double constant = 0.0;
    std::vector<double> freq;
    std::vector<double> cosAmp;
    std::vector<double> sinAmp;

    std::size_t size() const noexcept { return freq.size(); }
    void add(double frequency, double cosAmplitude, double sinAmplitude) {
        freq.push_back(frequency);
        cosAmp.push_back(cosAmplitude);
        sinAmp.push_back(sinAmplitude);
    }
    void append(const ModeSet& other);
    /// Direct evaluation at one time (std::cos / std::sin per mode).
    double evaluate(double t) const;
};

enum class KernelVariant { Scalar, Avx2 };

std::string_view variant_name(KernelVariant v);

/// Variant picked at startup: AVX2 when compiled in and supported by the CPU,
/// unless CSQAR_SIMD=scalar is set.
KernelVariant active_variant();
bool variant_available(KernelVariant v);

/// Accumulates the phasor sum of `modes` (without the constant) into out[0..grid.count).
void accumulate_modes(const ModeSet& modes, const UniformGrid& grid, std::span<double> out);
void accumulate_modes(const ModeSet& modes, const UniformGrid& grid, std::span<double> out,
                      KernelVariant variant);

/// constant + phasor sum on the grid.
std::vector<double> evaluate_on_grid(const ModeSet& modes, const UniformGrid& grid);

namespace detail {
void phasor_sum_scalar(const double* freq, const double* cosAmp, const double* sinAmp,
                       std::size_t nModes, const UniformGrid& grid, double* out);
#if defined(CSQAR_HAVE_AVX2)
void phasor_sum_avx2(const double* freq, const double* cosAmp, const double* sinAmp,
                     std::size_t nModes, const UniformGrid& grid, double* out);
#endif
} // namespace detail

} // namespace csqar::kernels
