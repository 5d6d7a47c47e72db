#pragma once

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// Highest order accepted by pawlikowska_points.
inline constexpr int kMaxPawlikowskaOrder = 12;

/// R(x) = f(x) - f(a) - (x-a) f'(x) + k/2 (x-a)^2, k = (f'(b) - f'(a)) / (b - a).
/// No Rolle-type hypothesis; throws DomainError when f'(a) or f'(b) does not exist.
TheoremResult riedel_sahoo_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// R(x) = f(b) - f(x) - (b-x) f'(x) - k/2 (b-x)^2, the mirror image of Riedel-Sahoo.
TheoremResult cakmak_tiryaki_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

enum class Anchor { a, b };

/// Second-order Flett identities anchored at a or at b:
///   a: f(x) - f(a) - (x-a) f'(x) + (x-a)^2/2 f''(x)
///   b: f(b) - f(x) - (b-x) f'(x) - (b-x)^2/2 f''(x)  (mirror image of a)
/// Hypothesis flag: f''(a) = f''(b).
TheoremResult second_order_points(Anchor anchor, const Expr& f, const Interval& iv,
                                  const SolverConfig& cfg = {});

/// R(x) = f(x) - f(a) - sum_{i=1..n} (-1)^(i+1)/i! (x-a)^i f^(i)(x), 1 <= n <= 12.
/// Hypothesis flag: f^(n)(a) = f^(n)(b).
TheoremResult pawlikowska_points(const Expr& f, const Interval& iv, int n, const SolverConfig& cfg = {});

/// The residuals above as plain residual functions.
Residual riedel_sahoo_residual(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});
Residual cakmak_tiryaki_residual(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});
Residual second_order_residual(Anchor anchor, const Expr& f, const Interval& iv);
Residual pawlikowska_residual(const Expr& f, const Interval& iv, int n);

} // namespace mvtlab
