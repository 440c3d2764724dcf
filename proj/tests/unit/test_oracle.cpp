#include <doctest.h>

#include <cmath>
#include <random>

#include "csqar/core/evolve.hpp"
#include "csqar/engine/refrigerator.hpp"
#include "csqar/error.hpp"
#include "csqar/oracle/dense_model.hpp"

using namespace csqar;
using namespace csqar::oracle;

TEST_SUITE("oracle") {

TEST_CASE("Taylor exponential matches diagonalization") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> d;
    ComplexMatrix h(6, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        h(i, i) = d(rng);
        for (std::size_t j = i + 1; j < 6; ++j) {
            h(i, j) = Complex(d(rng), d(rng));
            h(j, i) = std::conj(h(i, j));
        }
    }
    const Propagator prop(h);
    for (double t : {0.0, 0.01, 1.0, 13.7}) {
        const ComplexMatrix u = expm_taylor(h, t);
        CHECK(maxAbsDiff(u, prop.unitary(t)) < 1e-11);
        CHECK(maxAbsDiff(u * u.adjoint(), ComplexMatrix::identity(6)) < 1e-11);
    }
}

TEST_CASE("dense evolution composes") {
    engine::RefrigeratorParams p;
    p.nBath = {1, 2, 1};
    p.g = 0.2;
    const DenseModel m = build_dense(p);
    const ComplexMatrix u1 = expm_taylor(m.hamiltonian, 1.2);
    const ComplexMatrix u2 = expm_taylor(m.hamiltonian, 2.3);
    const ComplexMatrix step = u2 * (u1 * m.initialState * u1.adjoint()) * u2.adjoint();
    CHECK(maxAbsDiff(step, dense_evolve(m, 3.5)) < 1e-10);
}

TEST_CASE("partial trace of a product state") {
    const ComplexMatrix a{{0.7, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.3}};
    const ComplexMatrix b = ComplexMatrix::diagonal(std::vector<double>{0.2, 0.5, 0.3});
    const ComplexMatrix c{{0.6, 0.0}, {0.0, 0.4}};
    const ComplexMatrix rho = kron(kron(a, b), c);
    const std::vector<std::size_t> dims{2, 3, 2};
    CHECK(maxAbsDiff(partial_trace(rho, dims, 0), a) < 1e-15);
    CHECK(maxAbsDiff(partial_trace(rho, dims, 1), b) < 1e-15);
    CHECK(maxAbsDiff(partial_trace(rho, dims, 2), c) < 1e-15);
    CHECK_THROWS_AS(partial_trace(rho, dims, 3), DomainError);
    CHECK_THROWS_AS(partial_trace(rho, {2, 2}, 0), DomainError);
}

TEST_CASE("dense models are Hermitian with unit-trace initial states") {
    const DenseModel single = build_dense(spinstar::SingleStarParams{1.0, 2.0, 0.5, 3, 1.0});
    CHECK(single.dimension() == 8);
    CHECK(single.hamiltonian.isHermitian());
    CHECK(std::abs(single.initialState.trace() - 1.0) < 1e-14);

    engine::RefrigeratorParams p;
    p.nBath = {1, 1, 1};
    const DenseModel triple = build_dense(p);
    CHECK(triple.dimension() == 64);
    CHECK(triple.factorDims == std::vector<std::size_t>{2, 2, 2, 2, 2, 2});
    CHECK(triple.hamiltonian.isHermitian());
    CHECK(std::abs(triple.initialState.trace() - 1.0) < 1e-14);
    // the initial state is stationary under the uncoupled part
    const ComplexMatrix h0 = triple.hamiltonian -
                             dense_operator(triple, p, engine::Observable::Interaction, 1);
    ComplexMatrix hFree = h0;
    for (int q = 1; q <= 3; ++q) hFree -= dense_operator(triple, p, engine::Observable::CouplingEnergy, q);
    CHECK(commutatorFlow(hFree, triple.initialState).maxAbs() < 1e-15);
}

TEST_CASE("dimension cap") {
    engine::RefrigeratorParams p;
    p.nBath = {10, 10, 10};
    CHECK_THROWS_AS(build_dense(p), DomainError);
}

TEST_CASE("dense operators") {
    engine::RefrigeratorParams p;
    p.nBath = {2, 1, 1};
    const DenseModel m = build_dense(p);
    const ComplexMatrix sz = dense_operator(m, p, engine::Observable::SpinZ, 1);
    const ComplexMatrix pg = dense_operator(m, p, engine::Observable::GroundPopulation, 1);
    // P_g = 1/2 - S^z
    const ComplexMatrix id = ComplexMatrix::identity(m.dimension());
    CHECK(maxAbsDiff(pg, Complex(0.5) * id - sz) < 1e-15);
    ComplexMatrix total(m.dimension(), m.dimension());
    for (int q = 1; q <= 3; ++q)
        for (auto o : {engine::Observable::SystemEnergy, engine::Observable::BathEnergy,
                       engine::Observable::CouplingEnergy})
            total += dense_operator(m, p, o, q);
    total += dense_operator(m, p, engine::Observable::Interaction, 1);
    CHECK(maxAbsDiff(total, m.hamiltonian) < 1e-14);
    CHECK_THROWS_AS(dense_operator(m, p, engine::Observable::SpinZ, 4), DomainError);
}

TEST_CASE("central difference rate") {
    const spinstar::SingleStarParams s{1.0, 2.0, 0.5, 2, 1.0};
    const DenseModel m = build_dense(s);
    const ComplexMatrix op = dense_operator(m, s, engine::Observable::GroundPopulation);
    const double t = 0.8;
    const ComplexMatrix rho = dense_evolve(m, t);
    const double exact = (commutatorFlow(m.hamiltonian, rho) * op).trace().real();
    CHECK(std::abs(dense_rate(m, op, t) - exact) < 1e-8);
}

} // TEST_SUITE
