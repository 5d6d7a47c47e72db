#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mvtlab/errors.hpp"

namespace mvtlab {

/// Closed interval [a, b] with finite a < b.
class Interval {
public:
    Interval(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }
    double midpoint() const noexcept { return 0.5 * (a_ + b_); }
    /// a + b - x: the mirror image of x about the midpoint.
    double reflect(double x) const noexcept { return a_ + b_ - x; }
    bool contains_open(double x) const noexcept { return a_ < x && x < b_; }

private:
    double a_;
    double b_;
};

/// Every numeric knob of the solvers.
struct SolverConfig {
    int scan_points = 4096;
    double root_tol = 1e-12;          ///< absolute, on x
    double residual_tol = 1e-9;       ///< relative to the residual scale
    double quad_tol = 1e-10;
    double endpoint_margin = 1e-9;    ///< fraction of (b - a) excluded at each open end
    double singular_threshold = 1e12; ///< |f'| above this counts as non-existent

    /// Throws std::invalid_argument unless every field is positive and the
    /// margin is below 1/2.
    void validate() const;
};

enum class TheoremId {
    rolle,
    lagrange,
    cauchy,
    integral_mvt,
    flett,
    meyers_2_3,
    meyers_2_4,
    meyers_2_5,
    meyers_2_6,
    meyers_2_7,
    meyers_2_8,
    meyers_2_9,
    riedel_sahoo,
    cakmak_tiryaki,
    second_order_a,
    second_order_b,
    pawlikowska,
    cauchy_flett,
    volterra_null_mean,  // thm-4.9
    volterra_weighted,   // thm-4.10
    weighted_norm,
    lupu_t_pair,         // lupu-4.6, first identity
    lupu_t_equals_s,     // lupu-4.6, second identity
    lupu_s_pair,         // lupu-4.6, third identity
    lupu_weighted_t,     // lupu-4.7, first identity
    lupu_weighted_s,     // lupu-4.7, second identity
};

std::string_view to_string(TheoremId id);
std::optional<TheoremId> theorem_from_string(std::string_view name);

/// A located intermediate point.
struct PointResult {
    double xi = 0.0;
    double residual = 0.0;
    TheoremId theorem = TheoremId::flett;
    /// The residual vanishes on a whole region; xi is a representative.
    bool degenerate = false;
};

/// Outcome of one theorem search.
struct TheoremResult {
    TheoremId theorem = TheoremId::flett;
    bool hypothesis_satisfied = true;
    bool degenerate = false;
    /// Sorted ascending. When degenerate, a single representative point.
    std::vector<PointResult> points;
    double residual_scale = 1.0;
    /// Grid point with the smallest |residual|, filled when nothing was found.
    std::optional<PointResult> closest;

    bool found() const noexcept { return degenerate || !points.empty(); }
};

/// Value of a residual at one point together with the magnitude of the
/// largest term that went into it. The magnitude sets the scale against which
/// "zero" is judged.
struct ResidualSample {
    double value = 0.0;
    double magnitude = 0.0;
};

using ScalarFn = std::function<double(double)>;
using Residual = std::function<ResidualSample(double)>;

/// Wraps a plain function; its magnitude is |F|.
Residual as_residual(ScalarFn f);

enum class Endpoints { open, closed };

struct Bracket {
    double lo;
    double hi;
};

struct ScanResult {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<Bracket> brackets;
    /// max(1, largest residual term seen on the grid)
    double residual_scale = 1.0;
    bool identically_zero = false;
    std::size_t finite_count = 0;
};

/// Evaluates F on cfg.scan_points uniform nodes, plus 8 geometrically graded
/// nodes inside each end cell, and reports every sign change between finite
/// values. With Endpoints::open the nodes span [a + m(b-a), b - m(b-a)],
/// m = cfg.endpoint_margin. Throws DomainError if fewer than two values are
/// finite.
ScanResult bracket_scan(const Residual& f, const Interval& iv, const SolverConfig& cfg,
                        Endpoints endpoints = Endpoints::open);
ScanResult bracket_scan(const ScalarFn& f, const Interval& iv, const SolverConfig& cfg,
                        Endpoints endpoints = Endpoints::open);

/// Brent's method on a sign-change bracket. Never leaves [lo, hi].
double refine_root(const ScalarFn& f, double lo, double hi, const SolverConfig& cfg);

/// Globally adaptive Simpson quadrature with error target
/// cfg.quad_tol * (1 + |result|). Non-finite endpoint values are replaced by
/// samples just inside the interval. Throws QuadratureError when a panel
/// reaches depth 60 without meeting the target.
double integrate(const ScalarFn& f, double lo, double hi, const SolverConfig& cfg);
double integrate(const ScalarFn& f, double lo, double hi, double tol);

/// Central difference of order 1 or 2 with step eps^(1/3) (resp. eps^(1/4))
/// scaled by max(1, |x|).
double central_diff(const ScalarFn& f, double x, int order = 1);

/// Options for locate_points.
struct SearchOptions {
    Endpoints endpoints = Endpoints::open;
    /// Points where the residual may jump (kinks of abs/sgn, poles). The
    /// pieces between them are tested separately for degeneracy.
    std::vector<double> breakpoints;
};

/// The generic search behind every theorem solver: scan, detect
/// degeneracy, refine every bracket, and keep the roots whose residual
/// re-verifies within residual_tol * scale.
TheoremResult locate_points(TheoremId id, const Residual& residual, const Interval& iv,
                            const SolverConfig& cfg, const SearchOptions& options = {});

/// |u - v| <= tol * max(1, |u|, |v|)
bool nearly_equal(double u, double v, double tol);

} // namespace mvtlab
