#include "csqar/markov/gksl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csqar/analysis/optimizer.hpp"
#include "csqar/analysis/time_minimum.hpp"
#include "csqar/error.hpp"

namespace csqar::markov {

namespace {

constexpr std::size_t kDim = 8;
constexpr std::size_t kVec = kDim * kDim;

ComplexMatrix ket(int bits) {
    ComplexMatrix v(kDim, 1);
    v(static_cast<std::size_t>(bits), 0) = 1.0;
    return v;
}

ComplexMatrix outer(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b.adjoint(); }

bool isGround(std::size_t index, int qubit) { return ((index >> (3 - qubit)) & 1) == 1; }

} // namespace

double ohmic_density(double alpha, double omega, double cutoff) {
    return alpha * omega * std::exp(-omega / cutoff);
}

double bose_einstein(double omega, double beta) { return 1.0 / std::expm1(beta * omega); }

double decay_rate(double alpha, double omega, double cutoff, double beta) {
    if (omega == 0.0) throw DomainError("decay_rate: zero transition frequency");
    const double w = std::abs(omega);
    const double j = ohmic_density(alpha, w, cutoff);
    const double f = bose_einstein(w, beta);
    return omega > 0.0 ? j * (1.0 + f) : j * f;
}

std::vector<JumpChannel> build_jump_channels(const MarkovParams& p) {
    for (int i = 0; i < 3; ++i)
        if (!(p.epsilon[i] - p.g > 0.0))
            throw DomainError("build_jump_channels: eps_" + std::to_string(i + 1) +
                              " - g must be positive");
    if (p.g < 0.0) throw DomainError("build_jump_channels: g must be >= 0");

    const double r2 = 1.0 / std::sqrt(2.0);
    const ComplexMatrix plus = Complex(r2) * (ket(0b101) + ket(0b010));
    const ComplexMatrix minus = Complex(r2) * (ket(0b101) - ket(0b010));
    auto k = [](int bits) { return ket(bits); };

    struct Positive {
        int qubit;
        double omega;
        ComplexMatrix op;
    };
    const auto& e = p.epsilon;
    const double g = p.g;
    const std::vector<Positive> positive{
        {1, e[0], outer(k(0b111), k(0b011)) + outer(k(0b100), k(0b000))},
        {1, e[0] + g, Complex(r2) * (outer(k(0b110), plus) + outer(minus, k(0b001)))},
        {1, e[0] - g, Complex(r2) * (outer(plus, k(0b001)) - outer(k(0b110), minus))},
        {2, e[1], outer(k(0b110), k(0b100)) + outer(k(0b011), k(0b001))},
        {2, e[1] + g, Complex(r2) * (outer(k(0b111), plus) - outer(minus, k(0b000)))},
        {2, e[1] - g, Complex(r2) * (outer(plus, k(0b000)) + outer(k(0b111), minus))},
        {3, e[2], outer(k(0b111), k(0b110)) + outer(k(0b001), k(0b000))},
        {3, e[2] + g, Complex(r2) * (outer(k(0b011), plus) + outer(minus, k(0b100)))},
        {3, e[2] - g, Complex(r2) * (outer(plus, k(0b100)) - outer(k(0b011), minus))},
    };
    std::vector<JumpChannel> out;
    out.reserve(2 * positive.size());
    for (const auto& c : positive) {
        const int q = c.qubit - 1;
        out.push_back({c.qubit, c.omega, c.op, decay_rate(p.alpha[q], c.omega, p.cutoff, p.beta[q])});
        out.push_back(
            {c.qubit, -c.omega, c.op.adjoint(), decay_rate(p.alpha[q], -c.omega, p.cutoff, p.beta[q])});
    }
    return out;
}

double weak_coupling_ratio(const MarkovParams& p) {
    double maxRate = 0.0;
    for (const auto& c : build_jump_channels(p)) maxRate = std::max(maxRate, c.rate);
    double scale = *std::min_element(p.epsilon.begin(), p.epsilon.end());
    if (p.g > 0.0) scale = std::min(scale, p.g);
    return maxRate / scale;
}

void MarkovParams::validate() const {
    for (int i = 0; i < 3; ++i) {
        const std::string tag = " of qubit " + std::to_string(i + 1);
        if (!std::isfinite(epsilon[i]) || !std::isfinite(alpha[i]) || !std::isfinite(beta[i]))
            throw DomainError("MarkovParams: non-finite value" + tag);
        if (epsilon[i] <= 0.0) throw DomainError("MarkovParams: eps must be > 0" + tag);
        if (alpha[i] < 0.0) throw DomainError("MarkovParams: alpha must be >= 0" + tag);
        if (beta[i] <= 0.0) throw DomainError("MarkovParams: beta must be > 0" + tag);
    }
    if (!std::isfinite(g) || g < 0.0) throw DomainError("MarkovParams: g must be >= 0");
    if (!std::isfinite(cutoff) || cutoff <= 0.0)
        throw DomainError("MarkovParams: cutoff must be > 0");
    const double ratio = weak_coupling_ratio(*this);
    if (ratio >= kWeakCouplingLimit) {
        std::ostringstream msg;
        msg << "MarkovParams: weak-coupling ratio max(gamma)/min(eps, g) = " << ratio
            << " is not small (limit " << kWeakCouplingLimit << ")";
        throw DomainError(msg.str());
    }
}

ComplexMatrix system_hamiltonian(const MarkovParams& p) {
    ComplexMatrix h(kDim, kDim);
    for (std::size_t s = 0; s < kDim; ++s) {
        double e = 0.0;
        for (int q = 1; q <= 3; ++q) e += p.epsilon[q - 1] * (isGround(s, q) ? -0.5 : 0.5);
        h(s, s) = e;
    }
    h(0b010, 0b101) = p.g;
    h(0b101, 0b010) = p.g;
    return h;
}

ComplexMatrix thermal_product_state(const MarkovParams& p) {
    ComplexMatrix rho(kDim, kDim);
    for (std::size_t s = 0; s < kDim; ++s) {
        double pr = 1.0;
        for (int q = 1; q <= 3; ++q) {
            const double x = p.beta[q - 1] * p.epsilon[q - 1];
            // ground 1 / (1 + e^{-x}), excited 1 / (1 + e^{x})
            pr *= isGround(s, q) ? 1.0 / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
        }
        rho(s, s) = pr;
    }
    return rho;
}

double ground_population(const ComplexMatrix& rho, int qubit) {
    if (qubit < 1 || qubit > 3) throw DomainError("ground_population: qubit outside 1..3");
    double r = 0.0;
    for (std::size_t s = 0; s < kDim; ++s)
        if (isGround(s, qubit)) r += rho(s, s).real();
    return r;
}

ComplexMatrix liouvillian(const MarkovParams& p) {
    const ComplexMatrix h = system_hamiltonian(p);
    const ComplexMatrix id = ComplexMatrix::identity(kDim);
    auto transpose = [](const ComplexMatrix& a) {
        ComplexMatrix t(a.cols(), a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
        return t;
    };
    auto conj = [](ComplexMatrix a) {
        for (Complex& v : a.data()) v = std::conj(v);
        return a;
    };
    // A rho B  <->  kron(A, B^T) on the row-major vectorization
    ComplexMatrix l = Complex(0.0, -1.0) * (kron(h, id) - kron(id, transpose(h)));
    for (const auto& c : build_jump_channels(p)) {
        if (c.rate == 0.0) continue;
        const ComplexMatrix ldl = c.op.adjoint() * c.op;
        ComplexMatrix d = kron(c.op, conj(c.op));
        d -= Complex(0.5) * (kron(ldl, id) + kron(id, transpose(ldl)));
        l += Complex(c.rate) * d;
    }
    return l;
}

namespace {

using State = std::array<Complex, kVec>;

void apply(const ComplexMatrix& l, const State& y, State& out) {
    const Complex* a = l.data().data();
    for (std::size_t i = 0; i < kVec; ++i) {
        Complex acc{};
        const Complex* row = a + i * kVec;
        for (std::size_t j = 0; j < kVec; ++j) acc += row[j] * y[j];
        out[i] = acc;
    }
}

State toState(const ComplexMatrix& rho) {
    State y{};
    std::copy(rho.data().begin(), rho.data().end(), y.begin());
    return y;
}

ComplexMatrix toMatrix(const State& y) {
    ComplexMatrix rho(kDim, kDim);
    std::copy(y.begin(), y.end(), rho.data().begin());
    return rho;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

class Stepper {
public:
    Stepper(const ComplexMatrix& l, const IntegratorOptions& opt, GkslDiagnostics& diag)
        : l_(l), opt_(opt), diag_(diag), h_(opt.initialStep) {}

    // Advances y from t0 to exactly t1.
    void advance(State& y, double t0, double t1) {
        double t = t0;
        apply(l_, y, k1_);
        while (t < t1) {
            const double remaining = t1 - t;
            double h = std::min({h_, remaining, opt_.maxStep});
            const bool last = h >= remaining;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream msg;
                msg << "integrate_gksl: step size underflow at t = " << t;
                throw NumericalError(msg.str());
            }
            stage(y, h);
            double err = 0.0;
            for (std::size_t i = 0; i < kVec; ++i) {
                const Complex e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                       e6 * k6_[i] + e7 * k7_[i]);
                const double scale =
                    opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(yNew_[i]));
                const double re = e.real() / scale, im = e.imag() / scale;
                err += re * re + im * im;
            }
            err = std::sqrt(err / (2.0 * kVec));
            if (err <= 1.0) {
                t = last ? t1 : t + h;
                y = yNew_;
                k1_ = k7_;
                ++diag_.acceptedSteps;
                check(y);
                const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                if (!last || factor < 1.0) h_ = h * factor;
            } else {
                ++diag_.rejectedSteps;
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            }
        }
    }

private:
    void stage(const State& y, double h) {
        auto combine = [&](State& out, std::initializer_list<std::pair<double, const State*>> terms) {
            for (std::size_t i = 0; i < kVec; ++i) {
                Complex acc = y[i];
                for (const auto& [coef, k] : terms) acc += h * coef * (*k)[i];
                out[i] = acc;
            }
        };
        combine(tmp_, {{a21, &k1_}});
        apply(l_, tmp_, k2_);
        combine(tmp_, {{a31, &k1_}, {a32, &k2_}});
        apply(l_, tmp_, k3_);
        combine(tmp_, {{a41, &k1_}, {a42, &k2_}, {a43, &k3_}});
        apply(l_, tmp_, k4_);
        combine(tmp_, {{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}});
        apply(l_, tmp_, k5_);
        combine(tmp_, {{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}});
        apply(l_, tmp_, k6_);
        combine(yNew_, {{b1, &k1_}, {b3, &k3_}, {b4, &k4_}, {b5, &k5_}, {b6, &k6_}});
        apply(l_, yNew_, k7_);
    }

    void check(const State& y) {
        Complex tr{};
        double herm = 0.0;
        for (std::size_t i = 0; i < kDim; ++i) {
            tr += y[i * kDim + i];
            for (std::size_t j = 0; j < kDim; ++j)
                herm = std::max(herm, std::abs(y[i * kDim + j] - std::conj(y[j * kDim + i])));
        }
        diag_.maxTraceError = std::max(diag_.maxTraceError, std::abs(tr - 1.0));
        diag_.maxHermiticityError = std::max(diag_.maxHermiticityError, herm);
    }

    const ComplexMatrix& l_;
    IntegratorOptions opt_;
    GkslDiagnostics& diag_;
    double h_;
    State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, tmp_{}, yNew_{};
};

void weakCouplingWarning(const MarkovParams& p, std::vector<std::string>& warnings) {
    const double ratio = weak_coupling_ratio(p);
    if (ratio > kWeakCouplingWarn) {
        std::ostringstream msg;
        msg << "weak-coupling ratio " << ratio << " exceeds " << kWeakCouplingWarn;
        warnings.push_back(msg.str());
    }
}

double coldTemperature(const MarkovParams& p, const State& y) {
    double r = 0.0;
    for (std::size_t s = 0; s < kDim; ++s)
        if (isGround(s, 1)) r += y[s * kDim + s].real();
    if (!(r > 0.5 && r < 1.0)) return std::numeric_limits<double>::infinity();
    return p.epsilon[0] / std::log(r / (1.0 - r));
}

} // namespace

GkslSolution integrate_gksl(const MarkovParams& p, const ComplexMatrix& initialState,
                            const std::vector<double>& timeGrid, const IntegratorOptions& options) {
    p.validate();
    if (initialState.rows() != kDim || initialState.cols() != kDim)
        throw DomainError("integrate_gksl: initial state must be 8x8");
    if (std::abs(initialState.trace() - 1.0) > 1e-10)
        throw DomainError("integrate_gksl: initial state must have unit trace");
    if (!initialState.isHermitian(1e-12))
        throw DomainError("integrate_gksl: initial state must be Hermitian");
    for (std::size_t k = 0; k < timeGrid.size(); ++k)
        if (!std::isfinite(timeGrid[k]) || (k > 0 && !(timeGrid[k] > timeGrid[k - 1])))
            throw DomainError("integrate_gksl: time grid must be finite and strictly increasing");

    GkslSolution sol;
    weakCouplingWarning(p, sol.diagnostics.warnings);
    const ComplexMatrix l = liouvillian(p);
    Stepper stepper(l, options, sol.diagnostics);
    State y = toState(initialState);
    double t = timeGrid.empty() ? 0.0 : std::min(0.0, timeGrid.front());
    for (double target : timeGrid) {
        if (target > t) stepper.advance(y, t, target);
        t = target;
        sol.time.push_back(target);
        sol.states.push_back(toMatrix(y));
    }
    return sol;
}

MarkovMinimum markov_min_t1(const MarkovParams& p, const MarkovScan& scan) {
    p.validate();
    if (!(scan.step > 0.0) || !(scan.tMax > 0.0))
        throw DomainError("markov_min_t1: tMax and step must be positive");
    MarkovMinimum out;
    GkslDiagnostics diag;
    weakCouplingWarning(p, out.warnings);
    const ComplexMatrix l = liouvillian(p);
    Stepper stepper(l, IntegratorOptions{}, diag);

    const auto count = static_cast<std::size_t>(std::floor(scan.tMax / scan.step + 1e-9)) + 1;
    std::vector<State> states(count);
    std::vector<double> temps(count);
    State y = toState(thermal_product_state(p));
    for (std::size_t k = 0; k < count; ++k) {
        if (k > 0) stepper.advance(y, (k - 1) * scan.step, k * scan.step);
        states[k] = y;
        temps[k] = coldTemperature(p, y);
    }
    const auto best = static_cast<std::size_t>(
        std::distance(temps.begin(), std::min_element(temps.begin(), temps.end())));
    out.time = best * scan.step;
    out.t1 = temps[best];
    if (!std::isfinite(out.t1)) return out;

    const std::size_t from = best > 0 ? best - 1 : 0;
    const double lo = from * scan.step;
    const double hi = std::min(best + 1, count - 1) * scan.step;
    auto f = [&](double t) {
        State z = states[from];
        GkslDiagnostics scratch;
        Stepper s(l, IntegratorOptions{}, scratch);
        if (t > lo) s.advance(z, lo, t);
        return coldTemperature(p, z);
    };
    const analysis::ScalarMinimum m = analysis::golden_section(f, lo, hi, 1e-7);
    if (m.value < out.t1) {
        out.time = m.x;
        out.t1 = m.value;
    }
    return out;
}

MarkovOptimum markov_optimize(const MarkovParams& base, const MarkovRanges& ranges,
                              std::size_t budget, std::uint64_t seed, std::size_t threads) {
    analysis::Box box;
    box.lower = {ranges.alphaLow[0], ranges.alphaLow[1], ranges.alphaLow[2], ranges.gLow};
    box.upper = {ranges.alphaHigh[0], ranges.alphaHigh[1], ranges.alphaHigh[2], ranges.gHigh};
    box.validate();
    const MarkovScan scan{ranges.tMax, ranges.scanStep};
    auto at = [&](std::span<const double> x) {
        MarkovParams p = base;
        p.alpha = {x[0], x[1], x[2]};
        p.g = x[3];
        return p;
    };
    const analysis::Objective objective = [&](std::span<const double> x) {
        const MarkovMinimum m = markov_min_t1(at(x), scan);
        return analysis::Evaluation{m.t1, m.time};
    };
    analysis::OptimizerOptions opt;
    opt.budget = budget;
    opt.seed = seed;
    opt.threads = threads;
    const analysis::SearchResult r = analysis::minimize_box(objective, box, opt);
    MarkovOptimum out;
    out.params = at(r.best);
    out.time = r.bestEval.time;
    out.t1 = r.bestEval.value;
    out.evaluations = r.evaluations;
    out.restarts = r.restarts;
    return out;
}

} // namespace csqar::markov
