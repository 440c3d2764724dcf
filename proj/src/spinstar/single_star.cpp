#include "csqar/spinstar/single_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csqar/core/evolve.hpp"
#include "csqar/error.hpp"

namespace csqar::spinstar {

LocalTemperature local_temperature(double r, double epsilon) {
    if (!(r > 0.0 && r < 1.0))
        throw DomainError("local_temperature: ground population " + std::to_string(r) +
                          " outside (0, 1)");
    if (r == 0.5) return {std::numeric_limits<double>::infinity(), TemperatureKind::Infinite};
    const double value = epsilon / std::log(r / (1.0 - r));
    return {value, r > 0.5 ? TemperatureKind::Positive : TemperatureKind::Inverted};
}

double thermal_ground_population(double epsilon, double beta) {
    return 1.0 / (1.0 + std::exp(-beta * epsilon));
}

void SingleStarParams::validate() const {
    if (!std::isfinite(epsilon) || !std::isfinite(bathEnergy) || !std::isfinite(coupling) ||
        !std::isfinite(beta))
        throw DomainError("SingleStarParams: non-finite value");
    if (nBath < 1) throw DomainError("SingleStarParams: nBath must be >= 1");
    if (coupling < 0.0) throw DomainError("SingleStarParams: coupling must be >= 0");
    if (beta <= 0.0) throw DomainError("SingleStarParams: beta must be > 0");
}

std::vector<SectorLabel> enumerate_sectors(const SingleStarParams& p) {
    p.validate();
    std::vector<SectorLabel> out;
    out.reserve(static_cast<std::size_t>(p.nBath) + 2);
    for (int twiceM = -p.nBath - 1; twiceM <= p.nBath + 1; twiceM += 2) {
        const bool edge = std::abs(twiceM) == p.nBath + 1;
        out.push_back({twiceM, edge ? 1 : 2});
    }
    return out;
}

namespace {

bool isSector(const SingleStarParams& p, int twiceM) {
    return std::abs(twiceM) <= p.nBath + 1 && ((twiceM + p.nBath + 1) % 2 == 0);
}

// Log Boltzmann factors of the ground-branch |g>|m+1/2> and excited-branch
// |e>|m-1/2> states of a sector.
double logWeightGround(const SingleStarParams& p, double m) {
    return p.beta * p.epsilon / 2.0 - p.beta * p.bathEnergy * (m + 0.5);
}
double logWeightExcited(const SingleStarParams& p, double m) {
    return -p.beta * p.epsilon / 2.0 - p.beta * p.bathEnergy * (m - 0.5);
}

double initialGroundFraction(const SingleStarParams& p) {
    return 1.0 / (1.0 + std::exp(p.beta * (p.bathEnergy - p.epsilon)));
}

} // namespace

SectorHamiltonian sector_hamiltonian(const SingleStarParams& p, int twiceM) {
    p.validate();
    if (!isSector(p, twiceM))
        throw DomainError("sector_hamiltonian: 2m=" + std::to_string(twiceM) +
                          " is not a sector for N=" + std::to_string(p.nBath));
    const double m = twiceM / 2.0;
    const double halfN = p.nBath / 2.0;
    const double bMinus = -p.epsilon / 2.0 + p.bathEnergy * (m + 0.5);
    const double bPlus = p.epsilon / 2.0 + p.bathEnergy * (m - 0.5);
    if (twiceM == p.nBath + 1) return EdgeSector{twiceM, bPlus, true};
    if (twiceM == -p.nBath - 1) return EdgeSector{twiceM, bMinus, false};
    const double u = p.coupling * std::sqrt((halfN + m + 0.5) * (halfN - m + 0.5));
    const double delta = bMinus - bPlus;
    return SectorHamiltonian2x2{twiceM, bMinus, bPlus, u, std::sqrt(u * u + delta * delta / 4.0)};
}

SectorState evolve_sector(const SingleStarParams& p, int twiceM, double t) {
    const SectorHamiltonian h = sector_hamiltonian(p, twiceM);
    if (const auto* edge = std::get_if<EdgeSector>(&h)) {
        return edge->excited ? SectorState{twiceM, 0.0, 1.0, {}} : SectorState{twiceM, 1.0, 0.0, {}};
    }
    const auto& block = std::get<SectorHamiltonian2x2>(h);
    const ComplexMatrix hm{{block.bMinus, block.u}, {block.u, block.bPlus}};
    const double r0 = initialGroundFraction(p);
    const std::vector<double> diag{r0, 1.0 - r0};
    const ComplexMatrix rho = evolve_density(hm, ComplexMatrix::diagonal(diag), t);
    return {twiceM, rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)};
}

SectorState evolve_sector_closed_form(const SingleStarParams& p, int twiceM, double t) {
    const SectorHamiltonian h = sector_hamiltonian(p, twiceM);
    if (const auto* edge = std::get_if<EdgeSector>(&h)) {
        return edge->excited ? SectorState{twiceM, 0.0, 1.0, {}} : SectorState{twiceM, 1.0, 0.0, {}};
    }
    const auto& block = std::get<SectorHamiltonian2x2>(h);
    const double theta = block.theta;
    if (theta == 0.0) {
        const double r0 = initialGroundFraction(p);
        return {twiceM, r0, 1.0 - r0, {}};
    }
    // x = e^{beta(E - eps)}, mixing angle sin(a) = u / theta, cos(a) = delta / theta
    const double x = std::exp(p.beta * (p.bathEnergy - p.epsilon));
    const double sinA = block.u / theta;
    const double cosA = (block.bMinus - block.bPlus) / (2.0 * theta);
    const double sin2 = sinA * sinA;
    const double cos2t = std::cos(2.0 * theta * t);
    const double sin2t = std::sin(2.0 * theta * t);

    const double cGG =
        ((1.0 + cos2t) / 2.0 * sin2 + (1.0 - sin2) + x * (1.0 - cos2t) / 2.0 * sin2) / (x + 1.0);
    const double cEE =
        ((1.0 - cos2t) / 2.0 * sin2 + x * ((1.0 + cos2t) / 2.0 * sin2 + (1.0 - sin2))) / (x + 1.0);
    const std::complex<double> cGE =
        (x - 1.0) / (x + 1.0) *
        std::complex<double>((cos2t - 1.0) / 2.0 * sinA * cosA, -0.5 * sin2t * sinA);
    return {twiceM, cGG, cEE, cGE};
}

std::vector<double> sector_weights(const SingleStarParams& p) {
    const auto sectors = enumerate_sectors(p);
    std::vector<double> logW(sectors.size());
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const double m = sectors[k].m();
        const int twiceM = sectors[k].twiceM;
        if (twiceM == p.nBath + 1) {
            logW[k] = logWeightExcited(p, m);
        } else if (twiceM == -p.nBath - 1) {
            logW[k] = logWeightGround(p, m);
        } else {
            const double a = logWeightGround(p, m);
            const double b = logWeightExcited(p, m);
            logW[k] = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
        }
    }
    const double top = *std::max_element(logW.begin(), logW.end());
    std::vector<double> w(sectors.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) sum += (w[k] = std::exp(logW[k] - top));
    for (double& v : w) v /= sum;
    return w;
}

SpinReducedState reduced_spin_state(const SingleStarParams& p, double t) {
    const auto sectors = enumerate_sectors(p);
    const auto w = sector_weights(p);
    double r = 0.0;
    for (std::size_t k = 0; k < sectors.size(); ++k)
        r += w[k] * evolve_sector(p, sectors[k].twiceM, t).cGG;
    return {r, t};
}

double spin_ground_rate(const SingleStarParams& p, double t) {
    const auto sectors = enumerate_sectors(p);
    const auto w = sector_weights(p);
    double rate = 0.0;
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const SectorHamiltonian h = sector_hamiltonian(p, sectors[k].twiceM);
        if (const auto* block = std::get_if<SectorHamiltonian2x2>(&h))
            rate += w[k] * (-2.0 * block->u * evolve_sector(p, sectors[k].twiceM, t).cGE.imag());
    }
    return rate;
}

std::vector<double> reduced_bath_state(const SingleStarParams& p, double t) {
    const auto sectors = enumerate_sectors(p);
    const auto w = sector_weights(p);
    std::vector<double> pop(static_cast<std::size_t>(p.nBath) + 1, 0.0);
    // |g>|m+1/2> sits at bath index (2m + 1 + N)/2, |e>|m-1/2> at (2m - 1 + N)/2
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const int twiceM = sectors[k].twiceM;
        const SectorState s = evolve_sector(p, twiceM, t);
        const int gIndex = (twiceM + 1 + p.nBath) / 2;
        const int eIndex = (twiceM - 1 + p.nBath) / 2;
        if (gIndex >= 0 && gIndex <= p.nBath) pop[static_cast<std::size_t>(gIndex)] += w[k] * s.cGG;
        if (eIndex >= 0 && eIndex <= p.nBath) pop[static_cast<std::size_t>(eIndex)] += w[k] * s.cEE;
    }
    return pop;
}

} // namespace csqar::spinstar
