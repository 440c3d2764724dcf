#include <cmath>
#include <cstdlib>
#include <string>

#include "csqar/error.hpp"
#include "csqar/kernels/phasor.hpp"

namespace csqar::kernels {

void ModeSet::append(const ModeSet& other) {
    constant += other.constant;
    freq.insert(freq.end(), other.freq.begin(), other.freq.end());
    cosAmp.insert(cosAmp.end(), other.cosAmp.begin(), other.cosAmp.end());
    sinAmp.insert(sinAmp.end(), other.sinAmp.begin(), other.sinAmp.end());
}

double ModeSet::evaluate(double t) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < freq.size(); ++j) {
        const double phase = freq[j] * t;
        sum += cosAmp[j] * std::cos(phase) + sinAmp[j] * std::sin(phase);
    }
    return constant + sum;
}

std::string_view variant_name(KernelVariant v) {
    switch (v) {
    case KernelVariant::Scalar: return "scalar";
    case KernelVariant::Avx2: return "avx2";
    }
    return "unknown";
}

bool variant_available(KernelVariant v) {
    switch (v) {
    case KernelVariant::Scalar: return true;
    case KernelVariant::Avx2:
#if defined(CSQAR_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

KernelVariant active_variant() {
    static const KernelVariant chosen = [] {
        if (const char* env = std::getenv("CSQAR_SIMD"); env && std::string(env) == "scalar")
            return KernelVariant::Scalar;
        return variant_available(KernelVariant::Avx2) ? KernelVariant::Avx2
                                                       : KernelVariant::Scalar;
    }();
    return chosen;
}

void accumulate_modes(const ModeSet& modes, const UniformGrid& grid, std::span<double> out,
                      KernelVariant variant) {
    if (out.size() < grid.count) throw DomainError("accumulate_modes: output span too small");
    if (!variant_available(variant))
        throw DomainError("accumulate_modes: kernel variant not available on this CPU");
    switch (variant) {
    case KernelVariant::Scalar:
        detail::phasor_sum_scalar(modes.freq.data(), modes.cosAmp.data(), modes.sinAmp.data(),
                                  modes.size(), grid, out.data());
        return;
    case KernelVariant::Avx2:
#if defined(CSQAR_HAVE_AVX2)
        detail::phasor_sum_avx2(modes.freq.data(), modes.cosAmp.data(), modes.sinAmp.data(),
                                modes.size(), grid, out.data());
#endif
        return;
    }
}

void accumulate_modes(const ModeSet& modes, const UniformGrid& grid, std::span<double> out) {
    accumulate_modes(modes, grid, out, active_variant());
}

std::vector<double> evaluate_on_grid(const ModeSet& modes, const UniformGrid& grid) {
    std::vector<double> out(grid.count, modes.constant);
    accumulate_modes(modes, grid, out);
    return out;
}

} // namespace csqar::kernels
