#pragma once

#include <optional>
#include <vector>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// One request to locate the points of a theorem.
struct Problem {
    TheoremId theorem = TheoremId::flett;
    Expr f;
    std::optional<Expr> g;
    std::optional<Expr> weight;
    Interval interval{0.0, 1.0};
    int order = 1;  // pawlikowska only
};

/// Whether the theorem needs g / a weight function.
bool needs_second_function(TheoremId id);
bool needs_weight(TheoremId id);
/// Theorems stated on [0, 1] only.
bool fixed_unit_interval(TheoremId id);

/// Dispatches to the solver for problem.theorem. The operator identities that
/// come in groups (lupu-4.6, lupu-4.7) return one result per identity;
/// every other theorem returns exactly one. Throws std::invalid_argument
/// for a missing g or weight, or an interval other than [0, 1] where the
/// theorem is fixed to it.
std::vector<TheoremResult> solve(const Problem& problem, const SolverConfig& cfg = {});

struct Verification {
    double residual = 0.0;
    double scale = 1.0;
    double tolerance = 0.0;
    bool ok = false;
};

/// Re-evaluates the identity of `id` at xi from scratch: quotient forms where
/// the theorem has one, and fresh quadrature at quad_tol / 100 for the
/// integral identities. `residual_scale` is the scale the search used; the
/// check passes when |residual| <= tolerance, where tolerance is
/// residual_tol * max(scale, residual_scale) (100 * quad_tol for identities
/// with integrals).
Verification verify(const Problem& problem, TheoremId id, double xi, const SolverConfig& cfg = {},
                    double residual_scale = 1.0);

} // namespace mvtlab
