#include "csqar/oracle/dense_model.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "csqar/error.hpp"

namespace csqar::oracle {

namespace {

ComplexMatrix spinZ() { return ComplexMatrix{{-0.5, 0.0}, {0.0, 0.5}}; }
ComplexMatrix spinRaise() { return ComplexMatrix{{0.0, 0.0}, {1.0, 0.0}}; }
ComplexMatrix groundProjector() { return ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}; }

ComplexMatrix ladderZ(int n) {
    ComplexMatrix z(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) z(k, k) = k - n / 2.0;
    return z;
}

// J^+ on the j = N/2 ladder.
ComplexMatrix ladderRaise(int n) {
    const double j = n / 2.0;
    ComplexMatrix r(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
        const double m = k - j;
        r(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return r;
}

// Unit shift m_B -> m_B + 1 (zero on the top rung).
ComplexMatrix ladderShiftUp(int n) {
    ComplexMatrix r(n + 1, n + 1);
    for (int k = 0; k < n; ++k) r(k + 1, k) = 1.0;
    return r;
}

ComplexMatrix embed(const std::vector<std::size_t>& dims, std::size_t factor,
                    const ComplexMatrix& op) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t f = 0; f < dims.size(); ++f)
        out = kron(out, f == factor ? op : ComplexMatrix::identity(dims[f]));
    return out;
}

// Embeds a product of per-factor operators (identity where null).
ComplexMatrix embedProduct(const std::vector<std::size_t>& dims,
                           const std::vector<const ComplexMatrix*>& ops) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t f = 0; f < dims.size(); ++f)
        out = kron(out, ops[f] ? *ops[f] : ComplexMatrix::identity(dims[f]));
    return out;
}

ComplexMatrix thermal(const ComplexMatrix& h, double beta) {
    // h is diagonal here
    const std::size_t n = h.rows();
    std::vector<double> e(n);
    double lowest = h(0, 0).real();
    for (std::size_t i = 0; i < n; ++i) lowest = std::min(lowest, h(i, i).real());
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += (e[i] = std::exp(-beta * (h(i, i).real() - lowest)));
    for (double& v : e) v /= z;
    return ComplexMatrix::diagonal(e);
}

void checkDimension(std::size_t dim) {
    if (dim > kMaxDimension)
        throw DomainError("build_dense: dimension " + std::to_string(dim) + " exceeds the cap of " +
                          std::to_string(kMaxDimension));
}

ComplexMatrix pairHamiltonian(double eps, double bathE, double a, int n) {
    const ComplexMatrix sp = spinRaise();
    const ComplexMatrix jp = ladderRaise(n);
    ComplexMatrix h = Complex(eps) * kron(spinZ(), ComplexMatrix::identity(n + 1));
    h += Complex(bathE) * kron(ComplexMatrix::identity(2), ladderZ(n));
    h += Complex(a) * (kron(sp, jp.adjoint()) + kron(sp.adjoint(), jp));
    return h;
}

} // namespace

DenseModel build_dense(const spinstar::SingleStarParams& p) {
    p.validate();
    checkDimension(2 * static_cast<std::size_t>(p.nBath + 1));
    DenseModel m;
    m.factorDims = {2, static_cast<std::size_t>(p.nBath) + 1};
    m.hamiltonian = pairHamiltonian(p.epsilon, p.bathEnergy, p.coupling, p.nBath);
    m.initialState = kron(thermal(Complex(p.epsilon) * spinZ(), p.beta),
                          thermal(Complex(p.bathEnergy) * ladderZ(p.nBath), p.beta));
    return m;
}

DenseModel build_dense(const engine::RefrigeratorParams& p) {
    p.validate();
    std::size_t dim = 1;
    for (int n : p.nBath) dim *= 2 * static_cast<std::size_t>(n + 1);
    checkDimension(dim);

    DenseModel m;
    for (int n : p.nBath) {
        m.factorDims.push_back(2);
        m.factorDims.push_back(static_cast<std::size_t>(n) + 1);
    }
    m.hamiltonian = ComplexMatrix(dim, dim);
    m.initialState = ComplexMatrix::identity(1);
    for (int i = 0; i < 3; ++i) {
        const int n = p.nBath[i];
        const ComplexMatrix pair = pairHamiltonian(p.epsilon[i], p.bathEnergy[i], p.coupling[i], n);
        // the pair occupies factors 2i and 2i+1, which are adjacent
        ComplexMatrix left = ComplexMatrix::identity(1), right = ComplexMatrix::identity(1);
        for (int k = 0; k < i; ++k) left = ComplexMatrix::identity(left.rows() * 2 * (p.nBath[k] + 1));
        for (int k = i + 1; k < 3; ++k)
            right = ComplexMatrix::identity(right.rows() * 2 * (p.nBath[k] + 1));
        m.hamiltonian += kron(kron(left, pair), right);
        m.initialState = kron(m.initialState,
                              kron(thermal(Complex(p.epsilon[i]) * spinZ(), p.beta[i]),
                                   thermal(Complex(p.bathEnergy[i]) * ladderZ(n), p.beta[i])));
    }
    // g ( X1^- X2^+ X3^- + h.c. ), X^- = sigma^- (x) (bath shift up)
    const ComplexMatrix lower = spinRaise().adjoint();
    const ComplexMatrix raise = spinRaise();
    std::array<ComplexMatrix, 3> up, down;
    for (int i = 0; i < 3; ++i) {
        up[i] = ladderShiftUp(p.nBath[i]);
        down[i] = up[i].adjoint();
    }
    const std::vector<const ComplexMatrix*> ops{&lower, &up[0], &raise, &down[1], &lower, &up[2]};
    const ComplexMatrix x = embedProduct(m.factorDims, ops);
    m.hamiltonian += Complex(p.g) * (x + x.adjoint());
    return m;
}

ComplexMatrix expm_taylor(const ComplexMatrix& h, double t) {
    const std::size_t n = h.rows();
    ComplexMatrix a = Complex(0.0, -t) * h;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    a *= Complex(std::ldexp(1.0, -squarings));
    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = a * term;
        term *= Complex(1.0 / k);
        result += term;
        if (term.maxAbs() < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

ComplexMatrix dense_evolve(const DenseModel& model, double t) {
    const ComplexMatrix u = expm_taylor(model.hamiltonian, t);
    return u * model.initialState * u.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& factorDims,
                            std::size_t keep) {
    if (keep >= factorDims.size()) throw DomainError("partial_trace: factor out of range");
    const std::size_t total = std::accumulate(factorDims.begin(), factorDims.end(), std::size_t{1},
                                              std::multiplies<>());
    if (rho.rows() != total || rho.cols() != total)
        throw DomainError("partial_trace: matrix does not match the factor dimensions");
    std::size_t inner = 1; // product of dims after `keep`
    for (std::size_t f = keep + 1; f < factorDims.size(); ++f) inner *= factorDims[f];
    const std::size_t d = factorDims[keep];
    const std::size_t outer = total / (inner * d);
    ComplexMatrix out(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            Complex acc{};
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t in = 0; in < inner; ++in)
                    acc += rho((o * d + a) * inner + in, (o * d + b) * inner + in);
            out(a, b) = acc;
        }
    return out;
}

ComplexMatrix dense_evolve_and_trace(const DenseModel& model, double t, std::size_t keepFactor) {
    return partial_trace(dense_evolve(model, t), model.factorDims, keepFactor);
}

ComplexMatrix dense_operator(const DenseModel& model, const engine::RefrigeratorParams& p,
                             engine::Observable o, int qubit) {
    using engine::Observable;
    const auto& dims = model.factorDims;
    if (o == Observable::Energy) return model.hamiltonian;
    if (o == Observable::Interaction) {
        // everything in H that is not a pair term
        ComplexMatrix h = model.hamiltonian;
        for (int i = 1; i <= 3; ++i) {
            h -= dense_operator(model, p, Observable::SystemEnergy, i);
            h -= dense_operator(model, p, Observable::BathEnergy, i);
            h -= dense_operator(model, p, Observable::CouplingEnergy, i);
        }
        return h;
    }
    if (qubit < 1 || qubit > static_cast<int>(dims.size() / 2))
        throw DomainError("dense_operator: qubit index out of range");
    const std::size_t qf = qubit_factor(qubit), bf = bath_factor(qubit);
    const int n = static_cast<int>(dims[bf]) - 1;
    switch (o) {
    case Observable::GroundPopulation: return embed(dims, qf, groundProjector());
    case Observable::SpinZ: return embed(dims, qf, spinZ());
    case Observable::BathZ: return embed(dims, bf, ladderZ(n));
    case Observable::SystemEnergy:
        return Complex(p.epsilon[qubit - 1]) * embed(dims, qf, spinZ());
    case Observable::BathEnergy:
        return Complex(p.bathEnergy[qubit - 1]) * embed(dims, bf, ladderZ(n));
    case Observable::CouplingEnergy: {
        const ComplexMatrix sp = spinRaise(), jm = ladderRaise(n).adjoint();
        std::vector<const ComplexMatrix*> ops(dims.size(), nullptr);
        ops[qf] = &sp;
        ops[bf] = &jm;
        const ComplexMatrix x = embedProduct(dims, ops);
        return Complex(p.coupling[qubit - 1]) * (x + x.adjoint());
    }
    default: break;
    }
    throw DomainError("dense_operator: unsupported observable");
}

ComplexMatrix dense_operator(const DenseModel& model, const spinstar::SingleStarParams& p,
                             engine::Observable o) {
    using engine::Observable;
    if (o == Observable::Interaction) return ComplexMatrix(model.dimension(), model.dimension());
    engine::RefrigeratorParams r;
    r.epsilon = {p.epsilon, p.epsilon, p.epsilon};
    r.bathEnergy = {p.bathEnergy, p.bathEnergy, p.bathEnergy};
    r.coupling = {p.coupling, p.coupling, p.coupling};
    r.nBath = {p.nBath, p.nBath, p.nBath};
    r.beta = {p.beta, p.beta, p.beta};
    return dense_operator(model, r, o, 1);
}

double dense_expectation(const DenseModel& model, const ComplexMatrix& op, double t) {
    return (dense_evolve(model, t) * op).trace().real();
}

double dense_rate(const DenseModel& model, const ComplexMatrix& op, double t, double h) {
    return (dense_expectation(model, op, t + h) - dense_expectation(model, op, t - h)) / (2.0 * h);
}

} // namespace csqar::oracle
