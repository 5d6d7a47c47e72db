#pragma once

#include <optional>
#include <string_view>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// Outcome of deciding one sufficient condition.
///
/// Boundary: a strict inequality landed within residual_tol * scale of zero.
/// NotApplicable: a derivative the condition needs does not exist.
enum class Verdict { satisfied, not_satisfied, boundary, not_applicable };

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

/// Verdicts of the four known sufficient conditions for a Flett point, plus
/// what the numeric search actually found.
struct ConditionVector {
    Verdict flett = Verdict::not_applicable;
    Verdict trahan = Verdict::not_applicable;
    /// The Trahan product sat in the tolerance band around zero. The verdict
    /// is then Satisfied when the f'(a) factor vanishes and Boundary when
    /// only the f'(b) factor does.
    bool trahan_boundary = false;
    Verdict tong = Verdict::not_applicable;
    Verdict malesevic_t1 = Verdict::not_applicable;
    Verdict malesevic_m1 = Verdict::not_applicable;
    bool has_flett_point = false;
    /// Arithmetic mean (f(a) + f(b)) / 2 and integral mean of f.
    std::optional<double> m_of_f;
    std::optional<double> i_of_f;
};

Verdict check_flett_condition(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// (f'(b) - s)(f'(a) - s) with s the secant slope; nothing when an endpoint
/// derivative does not exist.
std::optional<double> trahan_product(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

Verdict check_trahan(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

struct Means {
    double arithmetic;  // M(f)
    double integral;    // I(f)
};

Means tong_means(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

Verdict check_tong(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// phi1(x) = (f(x) - f(a)) / (x - a) - f'(a), extended by phi1(a) = 0.
ScalarFn phi1(const Expr& f, double a);

/// phi1'(x) = [f'(x) - (f(x) - f(a)) / (x - a)] / (x - a) for x > a.
ScalarFn phi1_prime(const Expr& f, double a);

/// phi1'(a) = f''(a) / 2 from the second-order Taylor term. Uses the symbolic
/// f'' and falls back to a central difference; nothing if both fail.
std::optional<double> phi1_prime_at_a(const Expr& f, double a, const SolverConfig& cfg = {});

struct MalesevicVerdicts {
    Verdict t1;  // phi1'(b) phi1(b) < 0
    Verdict m1;  // phi1'(a) phi1(b) < 0
};

MalesevicVerdicts check_malesevic(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

/// Runs every checker and the Flett-point search.
ConditionVector classify(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

} // namespace mvtlab
