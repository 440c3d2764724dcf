#include "csqar/engine/refrigerator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csqar/core/parallel.hpp"
#include "csqar/error.hpp"

namespace csqar::engine {

namespace {

void checkQubit(int qubit, const char* what) {
    if (qubit < 1 || qubit > 3)
        throw DomainError(std::string(what) + ": index " + std::to_string(qubit) +
                          " outside 1..3");
}

int bitOf(std::uint8_t canonical, int q) { return (canonical >> (2 - q)) & 1; }

// Per-pair quantities of one sector, 0-based qubit q.
struct LocalBlock {
    double bMinus = 0.0;
    double bPlus = 0.0;
    double u = 0.0;
    bool hasGround = true;
    bool hasExcited = true;
};

LocalBlock localBlock(const RefrigeratorParams& p, int q, int twiceM) {
    const double m = twiceM / 2.0;
    const double halfN = p.nBath[q] / 2.0;
    LocalBlock b;
    b.bMinus = -p.epsilon[q] / 2.0 + p.bathEnergy[q] * (m + 0.5);
    b.bPlus = p.epsilon[q] / 2.0 + p.bathEnergy[q] * (m - 0.5);
    b.hasGround = twiceM != p.nBath[q] + 1;
    b.hasExcited = twiceM != -p.nBath[q] - 1;
    if (b.hasGround && b.hasExcited)
        b.u = p.coupling[q] * std::sqrt((halfN + m + 0.5) * (halfN - m + 0.5));
    return b;
}

double groundFraction(const RefrigeratorParams& p, int q) {
    return 1.0 / (1.0 + std::exp(p.beta[q] * (p.bathEnergy[q] - p.epsilon[q])));
}

// V^T A V for a symmetric A of the same dimension.
SmallSymmetric rotate(const SmallSpectrum& sp, const SmallSymmetric& a) {
    const std::size_t n = sp.dim;
    SmallSymmetric tmp;
    tmp.dim = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * sp.vectors(j, l);
            tmp(i, l) = s;
        }
    SmallSymmetric out;
    out.dim = n;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += sp.vectors(i, k) * tmp(i, l);
            out(k, l) = s;
            out(l, k) = s;
        }
    return out;
}

} // namespace

void RefrigeratorParams::validate() const {
    for (int q = 0; q < 3; ++q) {
        const std::string tag = " of qubit " + std::to_string(q + 1);
        if (!std::isfinite(epsilon[q]) || !std::isfinite(bathEnergy[q]) ||
            !std::isfinite(coupling[q]) || !std::isfinite(beta[q]))
            throw DomainError("RefrigeratorParams: non-finite value" + tag);
        if (nBath[q] < 1) throw DomainError("RefrigeratorParams: N must be >= 1" + tag);
        if (coupling[q] < 0.0) throw DomainError("RefrigeratorParams: A must be >= 0" + tag);
        if (beta[q] <= 0.0) throw DomainError("RefrigeratorParams: beta must be > 0" + tag);
    }
    if (!std::isfinite(g) || g < 0.0) throw DomainError("RefrigeratorParams: g must be >= 0");
}

bool RefrigeratorParams::isAutonomous(double tol) const {
    const double lhs = bathEnergy[1] - epsilon[1];
    const double rhs = bathEnergy[0] - epsilon[0] + bathEnergy[2] - epsilon[2];
    return std::abs(lhs - rhs) <= tol;
}

spinstar::SingleStarParams RefrigeratorParams::star(int qubit) const {
    checkQubit(qubit, "RefrigeratorParams::star");
    const int q = qubit - 1;
    return {epsilon[q], bathEnergy[q], coupling[q], nBath[q], beta[q]};
}

SectorEnumeration enumerate_triple_sectors(const RefrigeratorParams& p, double pruneTol) {
    p.validate();
    if (!(pruneTol >= 0.0 && pruneTol < 1.0))
        throw DomainError("enumerate_triple_sectors: pruneTol must lie in [0, 1)");

    std::array<std::vector<spinstar::SectorLabel>, 3> local;
    std::array<std::vector<double>, 3> w;
    std::array<std::vector<double>, 3> logW;
    for (int q = 0; q < 3; ++q) {
        const auto star = p.star(q + 1);
        local[q] = spinstar::enumerate_sectors(star);
        w[q] = spinstar::sector_weights(star);
        for (const auto& s : local[q]) {
            const double m = s.m();
            const double lg = p.beta[q] * (p.epsilon[q] / 2.0 - p.bathEnergy[q] * (m + 0.5));
            const double le = p.beta[q] * (-p.epsilon[q] / 2.0 - p.bathEnergy[q] * (m - 0.5));
            if (s.twiceM == p.nBath[q] + 1) logW[q].push_back(le);
            else if (s.twiceM == -p.nBath[q] - 1) logW[q].push_back(lg);
            else logW[q].push_back(std::max(lg, le) + std::log1p(std::exp(-std::abs(lg - le))));
        }
    }

    SectorEnumeration out;
    std::vector<TripleSectorLabel> all;
    all.reserve(local[0].size() * local[1].size() * local[2].size());
    for (std::size_t a = 0; a < local[0].size(); ++a)
        for (std::size_t b = 0; b < local[1].size(); ++b)
            for (std::size_t c = 0; c < local[2].size(); ++c) {
                TripleSectorLabel l;
                l.twiceM = {local[0][a].twiceM, local[1][b].twiceM, local[2][c].twiceM};
                l.localDim = {local[0][a].dim, local[1][b].dim, local[2][c].dim};
                l.logWeight = logW[0][a] + logW[1][b] + logW[2][c];
                l.weight = w[0][a] * w[1][b] * w[2][c];
                all.push_back(l);
            }
    out.totalCount = all.size();

    if (pruneTol == 0.0) {
        out.labels = std::move(all);
        out.retainedWeight = 1.0;
        return out;
    }
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return all[x].weight < all[y].weight; });
    std::vector<char> keep(all.size(), 1);
    double dropped = 0.0;
    for (std::size_t idx : order) {
        if (dropped + all[idx].weight >= pruneTol) break;
        dropped += all[idx].weight;
        keep[idx] = 0;
    }
    double retained = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k)
        if (keep[k]) {
            retained += all[k].weight;
            out.labels.push_back(all[k]);
        }
    out.retainedWeight = retained;
    return out;
}

int TripleSectorSystem::find(std::uint8_t canonical) const noexcept {
    for (std::size_t k = 0; k < dim(); ++k)
        if (states[k] == canonical) return static_cast<int>(k);
    return -1;
}

ComplexMatrix TripleSectorSystem::hamiltonianMatrix() const {
    ComplexMatrix h(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) h(i, j) = hamiltonian(i, j);
    return h;
}

ComplexMatrix TripleSectorSystem::initialState() const {
    return ComplexMatrix::diagonal(std::span<const double>(initialPopulations.data(), dim()));
}

TripleSectorSystem build_sector_hamiltonian(const RefrigeratorParams& p,
                                            const TripleSectorLabel& label) {
    TripleSectorSystem sys;
    sys.label = label;
    std::array<LocalBlock, 3> blocks;
    std::array<double, 3> r0{};
    for (int q = 0; q < 3; ++q) {
        blocks[q] = localBlock(p, q, label.twiceM[q]);
        r0[q] = (blocks[q].hasGround && blocks[q].hasExcited) ? groundFraction(p, q)
                : blocks[q].hasGround                         ? 1.0
                                                              : 0.0;
    }

    std::size_t n = 0;
    for (std::uint8_t c = 0; c < 8; ++c) {
        bool present = true;
        for (int q = 0; q < 3; ++q)
            present = present && (bitOf(c, q) == 0 ? blocks[q].hasGround : blocks[q].hasExcited);
        if (present) sys.states[n++] = c;
    }
    SmallSymmetric& h = sys.hamiltonian;
    h.dim = n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t ci = sys.states[i];
        double diag = 0.0;
        double pop = 1.0;
        for (int q = 0; q < 3; ++q) {
            const bool excited = bitOf(ci, q) == 1;
            diag += excited ? blocks[q].bPlus : blocks[q].bMinus;
            pop *= excited ? 1.0 - r0[q] : r0[q];
        }
        h(i, i) = diag;
        sys.initialPopulations[i] = pop;
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint8_t diff = ci ^ sys.states[j];
            double v = 0.0;
            for (int q = 0; q < 3; ++q)
                if (diff == (1u << (2 - q))) v = blocks[q].u;
            if ((ci == kInteractionLow && sys.states[j] == kInteractionHigh) ||
                (ci == kInteractionHigh && sys.states[j] == kInteractionLow))
                v = p.g;
            h(i, j) = v;
            h(j, i) = v;
        }
    }
    sys.spectrum = eig_small_symmetric(h);
    return sys;
}

ComplexMatrix initial_sector_state(const RefrigeratorParams& p, const TripleSectorLabel& label) {
    return build_sector_hamiltonian(p, label).initialState();
}

SmallSymmetric sector_operator(const RefrigeratorParams& p, const TripleSectorSystem& sys,
                               Observable o, int qubit) {
    SmallSymmetric op;
    op.dim = sys.dim();
    if (o == Observable::Energy) return sys.hamiltonian;
    if (o == Observable::Interaction) {
        const int lo = sys.find(kInteractionLow);
        const int hi = sys.find(kInteractionHigh);
        if (lo >= 0 && hi >= 0) {
            op(lo, hi) = p.g;
            op(hi, lo) = p.g;
        }
        return op;
    }
    checkQubit(qubit, "sector_operator");
    const int q = qubit - 1;
    const double m = sys.label.twiceM[q] / 2.0;
    for (std::size_t i = 0; i < op.dim; ++i) {
        const bool excited = bitOf(sys.states[i], q) == 1;
        switch (o) {
        case Observable::GroundPopulation: op(i, i) = excited ? 0.0 : 1.0; break;
        case Observable::SpinZ: op(i, i) = excited ? 0.5 : -0.5; break;
        case Observable::BathZ: op(i, i) = excited ? m - 0.5 : m + 0.5; break;
        case Observable::SystemEnergy: op(i, i) = p.epsilon[q] * (excited ? 0.5 : -0.5); break;
        case Observable::BathEnergy:
            op(i, i) = p.bathEnergy[q] * (excited ? m - 0.5 : m + 0.5);
            break;
        case Observable::CouplingEnergy: {
            const double u = localBlock(p, q, sys.label.twiceM[q]).u;
            for (std::size_t j = 0; j < op.dim; ++j)
                if ((sys.states[i] ^ sys.states[j]) == (1u << (2 - q))) op(i, j) = u;
            break;
        }
        default: break;
        }
    }
    return op;
}

Refrigerator::Refrigerator(const RefrigeratorParams& p, double pruneTol, std::size_t threads)
    : Refrigerator(p, enumerate_triple_sectors(p, pruneTol), pruneTol, threads) {}

Refrigerator::Refrigerator(const RefrigeratorParams& p, const SectorEnumeration& sectors,
                           double pruneTol, std::size_t threads)
    : params_(p), pruneTol_(pruneTol) {
    params_.validate();
    build(sectors, threads == 0 ? default_thread_count() : threads);
}

void Refrigerator::build(const SectorEnumeration& sectors, std::size_t threads) {
    threads_ = threads;
    totalCount_ = sectors.totalCount;
    retainedWeight_ = sectors.retainedWeight;
    const std::size_t n = sectors.labels.size();
    systems_.resize(n);
    rotatedInitial_.resize(n);
    reductionWeights_.resize(n);
    // Small chunks keep the scheduling overhead below the 8x8 diagonalizations.
    const std::size_t chunk = 64;
    parallel_for((n + chunk - 1) / chunk, threads_, [&](std::size_t c) {
        for (std::size_t s = c * chunk; s < std::min(n, (c + 1) * chunk); ++s) {
            systems_[s] = build_sector_hamiltonian(params_, sectors.labels[s]);
            SmallSymmetric p0;
            p0.dim = systems_[s].dim();
            for (std::size_t i = 0; i < p0.dim; ++i) p0(i, i) = systems_[s].initialPopulations[i];
            rotatedInitial_[s] = rotate(systems_[s].spectrum, p0);
        }
    });
    for (std::size_t s = 0; s < n; ++s)
        reductionWeights_[s] = sectors.labels[s].weight / retainedWeight_;
}

ComplexMatrix Refrigerator::sectorState(std::size_t s, double t) const {
    const SmallSpectrum& sp = systems_.at(s).spectrum;
    const SmallSymmetric& c = rotatedInitial_[s];
    const std::size_t n = sp.dim;
    std::array<Complex, 8> phase{};
    for (std::size_t k = 0; k < n; ++k) phase[k] = std::polar(1.0, -sp.values[k] * t);
    // M = diag(phase) C diag(phase)^*, rho = V M V^T
    ComplexMatrix tmp(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) acc += sp.vectors(i, k) * phase[k] * c(k, l);
            tmp(i, l) = acc * std::conj(phase[l]);
        }
    ComplexMatrix rho(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t l = 0; l < n; ++l) acc += tmp(i, l) * sp.vectors(j, l);
            rho(i, j) = acc;
        }
    return rho;
}

double Refrigerator::expectation(Observable o, int qubit, double t) const {
    std::vector<double> parts(systems_.size());
    parallel_for(systems_.size(), threads_, [&](std::size_t s) {
        const ComplexMatrix rho = sectorState(s, t);
        const SmallSymmetric op = sector_operator(params_, systems_[s], o, qubit);
        double acc = 0.0;
        for (std::size_t i = 0; i < op.dim; ++i)
            for (std::size_t j = 0; j < op.dim; ++j) acc += (rho(i, j) * op(j, i)).real();
        parts[s] = reductionWeights_[s] * acc;
    });
    return std::accumulate(parts.begin(), parts.end(), 0.0);
}

double Refrigerator::rate(Observable o, int qubit, double t) const {
    std::vector<double> parts(systems_.size());
    parallel_for(systems_.size(), threads_, [&](std::size_t s) {
        const ComplexMatrix rho = sectorState(s, t);
        const ComplexMatrix flow = commutatorFlow(systems_[s].hamiltonianMatrix(), rho);
        const SmallSymmetric op = sector_operator(params_, systems_[s], o, qubit);
        double acc = 0.0;
        for (std::size_t i = 0; i < op.dim; ++i)
            for (std::size_t j = 0; j < op.dim; ++j) acc += (flow(i, j) * op(j, i)).real();
        parts[s] = reductionWeights_[s] * acc;
    });
    return std::accumulate(parts.begin(), parts.end(), 0.0);
}

ReducedQubitState Refrigerator::reducedQubitState(int qubit, double t) const {
    checkQubit(qubit, "reducedQubitState");
    return {qubit, expectation(Observable::GroundPopulation, qubit, t), t};
}

std::vector<double> Refrigerator::bathPopulations(int bath, double t) const {
    checkQubit(bath, "bathPopulations");
    const int q = bath - 1;
    const int nb = params_.nBath[q];
    std::vector<std::vector<double>> parts(systems_.size());
    parallel_for(systems_.size(), threads_, [&](std::size_t s) {
        const TripleSectorSystem& sys = systems_[s];
        const ComplexMatrix rho = sectorState(s, t);
        std::vector<double> pop(static_cast<std::size_t>(nb) + 1, 0.0);
        for (std::size_t i = 0; i < sys.dim(); ++i) {
            // ground branch carries m_B = m + 1/2, excited m_B = m - 1/2
            const int twiceMB = sys.label.twiceM[q] + (bitOf(sys.states[i], q) ? -1 : 1);
            pop[static_cast<std::size_t>((twiceMB + nb) / 2)] +=
                reductionWeights_[s] * rho(i, i).real();
        }
        parts[s] = std::move(pop);
    });
    std::vector<double> total(static_cast<std::size_t>(nb) + 1, 0.0);
    for (const auto& part : parts)
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += part[k];
    return total;
}

namespace {

// Bohr-frequency expansion of one sector: X = (V^T p0 V) o (V^T O V),
// <O>(t) = sum_k X_kk + 2 sum_{k<l} X_kl cos((l_l - l_k) t).
void sectorModes(const SmallSpectrum& sp, const SmallSymmetric& rotatedInitial,
                 const SmallSymmetric& op, double weight, bool derivative,
                 kernels::ModeSet& out) {
    const SmallSymmetric rotated = rotate(sp, op);
    const std::size_t n = sp.dim;
    for (std::size_t k = 0; k < n; ++k) {
        if (!derivative) out.constant += weight * rotatedInitial(k, k) * rotated(k, k);
        for (std::size_t l = k + 1; l < n; ++l) {
            const double amp = 2.0 * weight * rotatedInitial(k, l) * rotated(k, l);
            if (amp == 0.0) continue;
            const double freq = sp.values[l] - sp.values[k];
            if (derivative) out.add(freq, 0.0, -amp * freq);
            else out.add(freq, amp, 0.0);
        }
    }
}

} // namespace

kernels::ModeSet Refrigerator::modes(Observable o, int qubit) const {
    const std::size_t chunk = 256;
    const std::size_t nChunks = (systems_.size() + chunk - 1) / chunk;
    std::vector<kernels::ModeSet> parts(nChunks);
    parallel_for(nChunks, threads_, [&](std::size_t c) {
        for (std::size_t s = c * chunk; s < std::min(systems_.size(), (c + 1) * chunk); ++s)
            sectorModes(systems_[s].spectrum, rotatedInitial_[s],
                        sector_operator(params_, systems_[s], o, qubit), reductionWeights_[s],
                        false, parts[c]);
    });
    kernels::ModeSet all;
    for (const auto& part : parts) all.append(part);
    return all;
}

kernels::ModeSet Refrigerator::rateModes(Observable o, int qubit) const {
    const std::size_t chunk = 256;
    const std::size_t nChunks = (systems_.size() + chunk - 1) / chunk;
    std::vector<kernels::ModeSet> parts(nChunks);
    parallel_for(nChunks, threads_, [&](std::size_t c) {
        for (std::size_t s = c * chunk; s < std::min(systems_.size(), (c + 1) * chunk); ++s)
            sectorModes(systems_[s].spectrum, rotatedInitial_[s],
                        sector_operator(params_, systems_[s], o, qubit), reductionWeights_[s],
                        true, parts[c]);
    });
    kernels::ModeSet all;
    for (const auto& part : parts) all.append(part);
    return all;
}

namespace {

TimeSeries finishSeries(const RefrigeratorParams& p, int qubit, std::vector<double> times,
                        std::vector<double> r) {
    TimeSeries ts;
    ts.qubitIndex = qubit;
    ts.time = std::move(times);
    ts.groundPopulation = std::move(r);
    ts.temperature.reserve(ts.time.size());
    for (double v : ts.groundPopulation)
        ts.temperature.push_back(spinstar::local_temperature(v, p.epsilon[qubit - 1]));
    return ts;
}

} // namespace

TimeSeries temperature_series(const Refrigerator& engine, int qubit,
                              const kernels::UniformGrid& grid) {
    checkQubit(qubit, "temperature_series");
    if (grid.count > 1 && !(grid.step > 0.0))
        throw DomainError("temperature_series: time grid must be strictly increasing");
    const kernels::ModeSet m = engine.modes(Observable::GroundPopulation, qubit);
    std::vector<double> times(grid.count);
    for (std::size_t k = 0; k < grid.count; ++k) times[k] = grid.at(k);
    return finishSeries(engine.params(), qubit, std::move(times), kernels::evaluate_on_grid(m, grid));
}

TimeSeries temperature_series(const Refrigerator& engine, int qubit,
                              std::span<const double> times) {
    checkQubit(qubit, "temperature_series");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw DomainError("temperature_series: time grid must be strictly increasing");
    const kernels::ModeSet m = engine.modes(Observable::GroundPopulation, qubit);
    std::vector<double> r(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) r[k] = m.evaluate(times[k]);
    return finishSeries(engine.params(), qubit, {times.begin(), times.end()}, std::move(r));
}

} // namespace csqar::engine
