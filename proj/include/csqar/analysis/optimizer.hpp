#pragma once

// Bound-constrained derivative-free minimization: quasi-random multistart followed by
// Nelder-Mead refinement from the best samples. Deterministic for a given seed and
// independent of the thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace csqar::analysis {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const noexcept { return lower.size(); }
    /// Throws DomainError for mismatched sizes, non-finite bounds or lower > upper.
    void validate() const;
};

/// Objective value plus the time at which it was attained (for objectives that
/// minimize over time internally; 0 otherwise).
struct Evaluation {
    double value = 0.0;
    double time = 0.0;
};

using Objective = std::function<Evaluation(std::span<const double>)>;

struct OptimizerOptions {
    std::size_t budget = 2000;   ///< total objective evaluations
    std::size_t samples = 0;     ///< quasi-random samples; 0 = budget / 10
    std::size_t starts = 8;      ///< local searches
    std::uint64_t seed = 1;
    std::size_t threads = 0;     ///< 0 = default_thread_count()
    double simplexSize = 0.15;   ///< initial simplex edge, as a fraction of each range
    double xtol = 1e-7;          ///< simplex diameter (unit box) at which a search stops
    double ftol = 1e-12;
};

struct SearchResult {
    std::vector<double> best;
    Evaluation bestEval;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
    /// Incumbent value after each evaluation, in the canonical (seed-determined) order.
    std::vector<double> incumbent;
};

/// Halton point `index` (1-based is skipped internally) in `dim` dimensions.
std::vector<double> halton_point(std::size_t index, std::size_t dim);

SearchResult minimize_box(const Objective& f, const Box& box, const OptimizerOptions& options);

} // namespace csqar::analysis
