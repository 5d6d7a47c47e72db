#pragma once

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// Roots of f' in (a, b). The hypothesis flag records whether f(a) = f(b).
TheoremResult rolle_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// Points where f'(c) equals the secant slope (f(b) - f(a)) / (b - a).
TheoremResult lagrange_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// Roots of f'(c)[g(b) - g(a)] - g'(c)[f(b) - f(a)].
TheoremResult cauchy_points(const Expr& f, const Expr& g, const Interval& iv,
                            const SolverConfig& cfg = {});

/// Points of the closed interval where f equals its mean value. Throws
/// DomainError when f is not finite on the scan grid.
TheoremResult integral_mvt_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

} // namespace mvtlab
