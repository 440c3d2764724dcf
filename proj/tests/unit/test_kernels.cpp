#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "csqar/error.hpp"
#include "csqar/kernels/phasor.hpp"

using namespace csqar;
using namespace csqar::kernels;

namespace {

ModeSet randomModes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> f(-12.0, 12.0), a(-1.0, 1.0);
    ModeSet m;
    m.constant = a(rng);
    for (std::size_t k = 0; k < n; ++k) m.add(f(rng), a(rng), a(rng));
    return m;
}

double maxDiff(const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
    return d;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernel matches direct evaluation") {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 256u}) {
        const ModeSet m = randomModes(n, n + 1);
        const UniformGrid grid{0.0, 0.005, 2001};
        std::vector<double> out(grid.count, 0.0);
        accumulate_modes(m, grid, out, KernelVariant::Scalar);
        for (std::size_t k = 0; k < grid.count; k += 37)
            CHECK(std::abs(out[k] + m.constant - m.evaluate(grid.at(k))) < 1e-11 * (1.0 + n));
    }
}

TEST_CASE("AVX2 kernel is equivalent to the scalar kernel") {
    if (!variant_available(KernelVariant::Avx2)) {
        MESSAGE("AVX2 not available; equivalence skipped");
        return;
    }
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 9u, 100u, 1023u}) {
        const ModeSet m = randomModes(n, 100 + n);
        for (const UniformGrid grid : {UniformGrid{0.0, 0.005, 2001}, UniformGrid{1.5, 0.25, 161},
                                       UniformGrid{0.0, 0.01, 3}, UniformGrid{2.0, 0.1, 1}}) {
            std::vector<double> s(grid.count, 0.5), v(grid.count, 0.5);
            accumulate_modes(m, grid, s, KernelVariant::Scalar);
            accumulate_modes(m, grid, v, KernelVariant::Avx2);
            CHECK(maxDiff(s, v) < 1e-12 * (1.0 + n));
        }
    }
}

TEST_CASE("accumulation adds to the existing output") {
    const ModeSet m = randomModes(5, 9);
    const UniformGrid grid{0.0, 0.1, 50};
    std::vector<double> once(grid.count, 0.0), twice(grid.count, 0.0);
    accumulate_modes(m, grid, once);
    accumulate_modes(m, grid, twice);
    accumulate_modes(m, grid, twice);
    for (std::size_t k = 0; k < grid.count; ++k) CHECK(twice[k] == doctest::Approx(2.0 * once[k]));
}

TEST_CASE("evaluate_on_grid includes the constant") {
    ModeSet m;
    m.constant = 0.25;
    m.add(2.0, 1.0, 0.0);
    const UniformGrid grid{0.0, 0.5, 5};
    const std::vector<double> v = evaluate_on_grid(m, grid);
    for (std::size_t k = 0; k < grid.count; ++k)
        CHECK(v[k] == doctest::Approx(0.25 + std::cos(2.0 * grid.at(k))).epsilon(1e-13));
}

TEST_CASE("long grids stay accurate across reseeding") {
    const ModeSet m = randomModes(20, 77);
    const UniformGrid grid{0.0, 0.003, 40 * kReseedInterval + 5};
    const std::vector<double> v = evaluate_on_grid(m, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.count; ++k)
        worst = std::max(worst, std::abs(v[k] - m.evaluate(grid.at(k))));
    CHECK(worst < 1e-11);
}

TEST_CASE("output span must cover the grid") {
    const ModeSet m = randomModes(2, 1);
    std::vector<double> small(3);
    CHECK_THROWS_AS(accumulate_modes(m, UniformGrid{0.0, 0.1, 4}, small), DomainError);
    CHECK(variant_name(KernelVariant::Scalar) == "scalar");
}

} // TEST_SUITE
