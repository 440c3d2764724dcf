#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace csqar::analysis {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping when the bracket is
/// narrower than tol. The endpoints themselves are also candidates.
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-9);

struct LocalMinimum {
    std::size_t index = 0; ///< grid index of the first local minimum
    double time = 0.0;     ///< refined time
    double value = 0.0;    ///< refined value
};

/// First k with v[k] < v[k-1] and v[k] <= v[k+1]. When `continuous` is given the
/// minimum is refined on (t[k-1], t[k+1]) by golden section. Returns nullopt for a
/// series without an interior local minimum. Throws DomainError for fewer than
/// three points or mismatched sizes.
std::optional<LocalMinimum> first_local_min(std::span<const double> t, std::span<const double> v,
                                            const std::function<double(double)>& continuous = {});

} // namespace csqar::analysis
