#include <doctest.h>

#include <cmath>
#include <numeric>
#include <variant>

#include "csqar/core/evolve.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/error.hpp"
#include "csqar/oracle/dense_model.hpp"
#include "csqar/spinstar/local_temperature.hpp"
#include "csqar/spinstar/single_star.hpp"

using namespace csqar;
using namespace csqar::spinstar;

namespace {

SingleStarParams star(double eps, double bathE, double a, int n, double beta) {
    return SingleStarParams{eps, bathE, a, n, beta};
}

double spinPlusBathZ(const SingleStarParams& p, double t) {
    const double r = reduced_spin_state(p, t).groundPopulation;
    const std::vector<double> bath = reduced_bath_state(p, t);
    double jz = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) jz += bath[k] * (k - p.nBath / 2.0);
    return (0.5 - r) + jz;
}

} // namespace

TEST_SUITE("spinstar") {

TEST_CASE("sector enumeration") {
    auto one = enumerate_sectors(star(1, 2, 0.5, 1, 1));
    REQUIRE(one.size() == 3);
    CHECK(one[0].twiceM == -2);
    CHECK(one[1].twiceM == 0);
    CHECK(one[2].twiceM == 2);
    CHECK(one[0].dim == 1);
    CHECK(one[1].dim == 2);
    CHECK(one[2].dim == 1);

    auto two = enumerate_sectors(star(1, 2, 0.5, 2, 1));
    REQUIRE(two.size() == 4);
    CHECK(two[0].twiceM == -3);
    CHECK(two[3].twiceM == 3);
    CHECK(enumerate_sectors(star(1, 2, 0.5, 30, 1)).size() == 32);
}

TEST_CASE("sector Hamiltonian elements") {
    const auto h = std::get<SectorHamiltonian2x2>(sector_hamiltonian(star(1, 1, 0.5, 2, 1), 1));
    CHECK(h.bMinus - h.bPlus == doctest::Approx(0.0));
    CHECK(h.u == doctest::Approx(0.5 * std::sqrt(2.0)));
    CHECK(h.theta == doctest::Approx(0.5 * std::sqrt(2.0)));

    for (int n : {1, 4, 9})
        for (const SectorLabel& s : enumerate_sectors(star(1, 2, 0.3, n, 1))) {
            if (s.dim != 2) continue;
            const auto g = std::get<SectorHamiltonian2x2>(sector_hamiltonian(star(1, 2, 0.3, n, 1), s.twiceM));
            CHECK(g.bMinus - g.bPlus == doctest::Approx(1.0));
        }

    const auto z = std::get<SectorHamiltonian2x2>(sector_hamiltonian(star(1, 2.5, 0.0, 3, 1), 0));
    CHECK(z.u == 0.0);
    CHECK(z.theta == doctest::Approx(0.75));

    const auto top = std::get<EdgeSector>(sector_hamiltonian(star(1, 2, 0.5, 3, 1), 4));
    CHECK(top.excited);
    CHECK_THROWS_AS(sector_hamiltonian(star(1, 2, 0.5, 3, 1), 1), DomainError);
    CHECK_THROWS_AS(sector_hamiltonian(star(1, 2, 0.5, 3, 1), 6), DomainError);
}

TEST_CASE("sector evolution examples") {
    const SingleStarParams p = star(1, 2, 0.5, 4, 0.7);
    const SectorState s0 = evolve_sector(p, 1, 0.0);
    CHECK(s0.cGG == doctest::Approx(1.0 / (1.0 + std::exp(0.7 * (2.0 - 1.0)))).epsilon(1e-14));

    const SingleStarParams frozen = star(1, 2, 0.0, 4, 1.0);
    for (double t : {0.0, 1.0, 7.5}) {
        const SectorState s = evolve_sector(frozen, -1, t);
        CHECK(s.cGG == doctest::Approx(evolve_sector(frozen, -1, 0.0).cGG).epsilon(1e-14));
        CHECK(std::abs(s.cGE) < 1e-15);
    }

    // resonance, pure ground start: c_ee = sin^2(u t)
    const SingleStarParams res = star(1.3, 1.3, 0.4, 5, 1.0);
    const auto h = std::get<SectorHamiltonian2x2>(sector_hamiltonian(res, 0));
    const ComplexMatrix hm{{h.bMinus, h.u}, {h.u, h.bPlus}};
    const ComplexMatrix ground{{1.0, 0.0}, {0.0, 0.0}};
    for (double t : {0.2, 1.7, 4.4}) {
        const double cee = evolve_density(hm, ground, t)(1, 1).real();
        CHECK(cee == doctest::Approx(std::sin(h.u * t) * std::sin(h.u * t)).epsilon(1e-12));
    }
}

TEST_CASE("closed-form sector elements agree with diagonalization") {
    for (int n : {1, 2, 5}) for (double eps : {0.5, 1.0, 2.0}) for (double bathE : {0.5, 1.0, 2.0})
    for (double a : {0.1, 0.5}) for (double beta : {0.5, 1.0}) {
        const SingleStarParams p = star(eps, bathE, a, n, beta);
        for (const SectorLabel& s : enumerate_sectors(p))
            for (double t : {0.0, 0.7, 3.1}) {
                const SectorState x = evolve_sector(p, s.twiceM, t);
                const SectorState y = evolve_sector_closed_form(p, s.twiceM, t);
                CHECK(std::abs(x.cGG - y.cGG) < 1e-10);
                CHECK(std::abs(x.cEE - y.cEE) < 1e-10);
                CHECK(std::abs(x.cGE - y.cGE) < 1e-10);
                CHECK(std::abs(x.cGG + x.cEE - 1.0) < 1e-12);
            }
    }
}

TEST_CASE("sector weights are normalized") {
    for (int n : {1, 3, 30, 200}) {
        const std::vector<double> w = sector_weights(star(1, 2, 0.5, n, 1));
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        for (double v : w) CHECK(v >= 0.0);
    }
}

TEST_CASE("reduced states at t = 0 are thermal") {
    const SingleStarParams p = star(1, 2, 0.5, 6, 1);
    CHECK(reduced_spin_state(p, 0.0).groundPopulation ==
          doctest::Approx(std::exp(0.5) / (std::exp(0.5) + std::exp(-0.5))).epsilon(1e-14));
    const std::vector<double> b = reduced_bath_state(star(1, 1, 0.5, 1, 1), 0.0);
    REQUIRE(b.size() == 2);
    CHECK(b[0] / b[1] == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("no coupling means no dynamics") {
    const SingleStarParams p = star(1, 2, 0.0, 5, 1);
    const double r0 = reduced_spin_state(p, 0.0).groundPopulation;
    const std::vector<double> b0 = reduced_bath_state(p, 0.0);
    for (double t : {0.5, 3.0, 20.0}) {
        CHECK(reduced_spin_state(p, t).groundPopulation == doctest::Approx(r0).epsilon(1e-14));
        const std::vector<double> b = reduced_bath_state(p, t);
        for (std::size_t k = 0; k < b.size(); ++k) CHECK(b[k] == doctest::Approx(b0[k]).epsilon(1e-14));
    }
}

TEST_CASE("reduced states match the dense oracle") {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) for (double eps : {0.5, 1.0, 2.0}) for (double bathE : {0.5, 1.0, 2.0})
    for (double a : {0.1, 0.5}) for (double beta : {0.5, 1.0}) {
        const SingleStarParams p = star(eps, bathE, a, n, beta);
        const oracle::DenseModel model = oracle::build_dense(p);
        for (double t : {0.0, 0.7, 3.1}) {
            const ComplexMatrix rho = oracle::dense_evolve(model, t);
            const ComplexMatrix spin = oracle::partial_trace(rho, model.factorDims, 0);
            const ComplexMatrix bath = oracle::partial_trace(rho, model.factorDims, 1);
            const double r = reduced_spin_state(p, t).groundPopulation;
            const std::vector<double> pb = reduced_bath_state(p, t);
            worst = std::max({worst, std::abs(spin(0, 0) - r), std::abs(spin(1, 1) - (1.0 - r)),
                              std::abs(spin(0, 1))});
            for (std::size_t i = 0; i < pb.size(); ++i)
                for (std::size_t k = 0; k < pb.size(); ++k)
                    worst = std::max(worst, std::abs(bath(i, k) - (i == k ? pb[i] : 0.0)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("total magnetization is conserved") {
    const SingleStarParams p = star(1, 2, 0.5, 8, 0.8);
    const double m0 = spinPlusBathZ(p, 0.0);
    for (double t : {0.3, 1.0, 4.0, 10.0}) CHECK(std::abs(spinPlusBathZ(p, t) - m0) < 1e-10);
}

TEST_CASE("ground rate is the derivative of r") {
    const SingleStarParams p = star(1, 2, 0.5, 7, 1);
    const double h = 1e-5;
    for (double t : {0.1, 0.9, 2.5}) {
        const double fd = (reduced_spin_state(p, t + h).groundPopulation -
                           reduced_spin_state(p, t - h).groundPopulation) / (2.0 * h);
        CHECK(std::abs(spin_ground_rate(p, t) - fd) < 1e-8);
    }
    CHECK(spin_ground_rate(p, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("local temperature") {
    const double r = std::exp(1.0) / (1.0 + std::exp(1.0));
    CHECK(local_temperature(r, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(local_temperature(r, 2.0).value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(local_temperature(1.0 - 1e-12, 1.0).value < 0.04);
    CHECK(local_temperature(1.0 - 1e-12, 1.0).value > 0.0);
    CHECK(local_temperature(0.5, 1.0).kind == TemperatureKind::Infinite);
    CHECK(std::isinf(local_temperature(0.5, 1.0).value));
    const LocalTemperature inverted = local_temperature(0.3, 1.0);
    CHECK(inverted.kind == TemperatureKind::Inverted);
    CHECK(inverted.value < 0.0);
    CHECK_THROWS_AS(local_temperature(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(local_temperature(1.0, 1.0), DomainError);
    CHECK(thermal_ground_population(1.0, 1.0) == doctest::Approx(r).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(star(1, 2, 0.5, 0, 1).validate(), DomainError);
    CHECK_THROWS_AS(star(1, 2, -0.1, 2, 1).validate(), DomainError);
    CHECK_THROWS_AS(star(1, 2, 0.5, 2, 0).validate(), DomainError);
    CHECK_THROWS_AS(star(NAN, 2, 0.5, 2, 1).validate(), DomainError);
}

} // TEST_SUITE
