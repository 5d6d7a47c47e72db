#pragma once

#include <optional>
#include <vector>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// Result of scanning f for places where its symbolic derivative cannot be
/// trusted.
struct Smoothness {
    /// f and f' finite (and |f'| below the singular threshold) on the open
    /// grid, and no abs()/sgn() argument changes sign there.
    bool differentiable = true;
    /// Sorted locations of kinks, jumps and poles found on the grid.
    std::vector<double> breakpoints;
};

Smoothness scan_smoothness(const Expr& f, const Interval& iv, const SolverConfig& cfg);

/// One-sided derivative at an endpoint: the symbolic derivative `df`
/// evaluated at x, or nothing when that value is non-finite or exceeds
/// cfg.singular_threshold.
std::optional<double> endpoint_derivative(const Expr& df, double x, const SolverConfig& cfg);

/// Value of f at x, or DomainError if it is not finite.
double finite_value(const Expr& f, double x, const char* what);

} // namespace mvtlab
