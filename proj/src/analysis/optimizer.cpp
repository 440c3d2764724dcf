#include "csqar/analysis/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "csqar/core/parallel.hpp"
#include "csqar/error.hpp"

namespace csqar::analysis {

void Box::validate() const {
    if (lower.size() != upper.size() || lower.empty())
        throw DomainError("Box: lower and upper bounds must be non-empty and of equal size");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw DomainError("Box: non-finite bound in dimension " + std::to_string(i));
        if (lower[i] > upper[i])
            throw DomainError("Box: empty range in dimension " + std::to_string(i));
    }
}

std::vector<double> halton_point(std::size_t index, std::size_t dim) {
    static constexpr std::array<unsigned, 12> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (dim > primes.size()) throw DomainError("halton_point: at most 12 dimensions");
    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        double f = 1.0, r = 0.0;
        for (std::size_t i = index; i > 0; i /= primes[d]) {
            f /= primes[d];
            r += f * static_cast<double>(i % primes[d]);
        }
        x[d] = r;
    }
    return x;
}

namespace {

// Works in unit coordinates over the free (non-degenerate) dimensions only.
class UnitProblem {
public:
    UnitProblem(const Objective& f, const Box& box) : f_(f), box_(box) {
        for (std::size_t i = 0; i < box.dim(); ++i)
            if (box.upper[i] > box.lower[i]) free_.push_back(i);
    }

    std::size_t dim() const noexcept { return free_.size(); }

    std::vector<double> toBox(std::span<const double> u) const {
        std::vector<double> x = box_.lower;
        for (std::size_t k = 0; k < free_.size(); ++k) {
            const std::size_t i = free_[k];
            x[i] = box_.lower[i] + std::clamp(u[k], 0.0, 1.0) * (box_.upper[i] - box_.lower[i]);
        }
        return x;
    }

    Evaluation operator()(std::span<const double> u) const {
        const std::vector<double> x = toBox(u);
        Evaluation e = f_(x);
        if (std::isnan(e.value)) e.value = std::numeric_limits<double>::infinity();
        return e;
    }

private:
    const Objective& f_;
    const Box& box_;
    std::vector<std::size_t> free_;
};

struct Trace {
    std::vector<std::vector<double>> points;
    std::vector<Evaluation> evals;
};

struct Vertex {
    std::vector<double> u;
    Evaluation e;
};

// Nelder-Mead with the standard coefficients; trial points are clamped to the unit box.
// Restarts from the incumbent with a smaller simplex while budget remains and the
// previous pass still improved.
void nelderMead(const UnitProblem& problem, std::vector<double> start, Evaluation startEval,
                std::size_t budget, const OptimizerOptions& opt, Trace& trace) {
    const std::size_t n = problem.dim();
    std::size_t used = 0;
    auto eval = [&](std::vector<double> u) {
        for (double& v : u) v = std::clamp(v, 0.0, 1.0);
        const Evaluation e = problem(u);
        trace.points.push_back(u);
        trace.evals.push_back(e);
        ++used;
        return Vertex{std::move(u), e};
    };
    auto less = [](const Vertex& a, const Vertex& b) { return a.e.value < b.e.value; };

    Vertex best{std::move(start), startEval};
    double size = opt.simplexSize;
    while (used + n + 1 <= budget) {
        std::vector<Vertex> simplex{best};
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> u = best.u;
            u[i] = u[i] + size <= 1.0 ? u[i] + size : u[i] - size;
            simplex.push_back(eval(std::move(u)));
        }
        const double passStart = best.e.value;
        while (used < budget) {
            std::stable_sort(simplex.begin(), simplex.end(), less);
            const double fBest = simplex.front().e.value;
            const double fWorst = simplex.back().e.value;
            double diameter = 0.0;
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    diameter = std::max(diameter, std::abs(simplex[k].u[i] - simplex[0].u[i]));
            if (diameter < opt.xtol) break;
            if (std::isfinite(fWorst) && fWorst - fBest <= opt.ftol * (1.0 + std::abs(fBest)))
                break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].u[i] / n;
            auto along = [&](double coef) {
                std::vector<double> u(n);
                for (std::size_t i = 0; i < n; ++i)
                    u[i] = centroid[i] + coef * (centroid[i] - simplex[n].u[i]);
                return u;
            };
            Vertex reflected = eval(along(1.0));
            if (reflected.e.value < simplex[0].e.value) {
                if (used < budget) {
                    Vertex expanded = eval(along(2.0));
                    simplex[n] = expanded.e.value < reflected.e.value ? expanded : reflected;
                } else {
                    simplex[n] = reflected;
                }
                continue;
            }
            if (reflected.e.value < simplex[n - 1].e.value) {
                simplex[n] = reflected;
                continue;
            }
            if (used >= budget) break;
            const bool outside = reflected.e.value < simplex[n].e.value;
            Vertex contracted = eval(along(outside ? 0.5 : -0.5));
            if (contracted.e.value < std::min(reflected.e.value, simplex[n].e.value)) {
                simplex[n] = contracted;
                continue;
            }
            if (outside && reflected.e.value < simplex[n].e.value) simplex[n] = reflected;
            // shrink towards the best vertex
            for (std::size_t k = 1; k <= n && used < budget; ++k) {
                std::vector<double> u(n);
                for (std::size_t i = 0; i < n; ++i)
                    u[i] = simplex[0].u[i] + 0.5 * (simplex[k].u[i] - simplex[0].u[i]);
                simplex[k] = eval(std::move(u));
            }
        }
        const auto it = std::min_element(simplex.begin(), simplex.end(), less);
        if (it->e.value < best.e.value) best = *it;
        if (!(best.e.value < passStart - opt.ftol * (1.0 + std::abs(passStart)))) break;
        size = std::max(size * 0.25, 10.0 * opt.xtol);
    }
}

} // namespace

SearchResult minimize_box(const Objective& f, const Box& box, const OptimizerOptions& options) {
    box.validate();
    if (options.budget < 1) throw DomainError("minimize_box: budget must be >= 1");
    const UnitProblem problem(f, box);
    const std::size_t n = problem.dim();
    const std::size_t threads = options.threads == 0 ? default_thread_count() : options.threads;

    SearchResult result;
    if (n == 0) {
        const Evaluation e = problem(std::vector<double>{});
        result.best = box.lower;
        result.bestEval = e;
        result.evaluations = 1;
        result.incumbent = {e.value};
        return result;
    }

    std::size_t samples = options.samples ? options.samples : options.budget / 10;
    samples = std::clamp<std::size_t>(samples, 1, options.budget);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(n);
    for (double& s : shift) s = unif(rng);

    std::vector<std::vector<double>> samplePoints(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<double> u = halton_point(k + 1, n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::fmod(u[i] + shift[i], 1.0);
        samplePoints[k] = std::move(u);
    }
    std::vector<Evaluation> sampleEvals(samples);
    parallel_for(samples, threads, [&](std::size_t k) { sampleEvals[k] = problem(samplePoints[k]); });

    std::vector<std::size_t> order(samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sampleEvals[a].value < sampleEvals[b].value;
    });
    const std::size_t remaining = options.budget - samples;
    std::size_t starts = std::min(options.starts, samples);
    if (remaining < starts * (n + 2)) starts = remaining / (n + 2);

    std::vector<Trace> traces(starts);
    parallel_for(starts, threads, [&](std::size_t s) {
        const std::size_t perStart = remaining / starts + (s < remaining % starts ? 1 : 0);
        nelderMead(problem, samplePoints[order[s]], sampleEvals[order[s]], perStart, options,
                   traces[s]);
    });

    // Canonical order: samples, then each local search in start order.
    double incumbent = std::numeric_limits<double>::infinity();
    std::vector<double> bestU;
    auto visit = [&](const std::vector<double>& u, const Evaluation& e) {
        if (e.value < incumbent || bestU.empty()) {
            incumbent = e.value;
            bestU = u;
            result.bestEval = e;
        }
        result.incumbent.push_back(incumbent);
    };
    for (std::size_t k = 0; k < samples; ++k) visit(samplePoints[k], sampleEvals[k]);
    for (const Trace& t : traces)
        for (std::size_t k = 0; k < t.evals.size(); ++k) visit(t.points[k], t.evals[k]);

    result.best = problem.toBox(bestU);
    result.evaluations = result.incumbent.size();
    result.restarts = starts;
    return result;
}

} // namespace csqar::analysis
