#pragma once

#include <array>
#include <string_view>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// Flett's theorem and the seven Meyers variants. Each variant binds one
/// residual and one sufficient hypothesis:
///
/// | variant    | identity for f'(xi)            | hypothesis                               |
/// |------------|--------------------------------|------------------------------------------|
/// | flett_2_2  | (f(xi) - f(a)) / (xi - a)      | f'(a) = f'(b)                            |
/// | meyers_2_3 | (f(b) - f(xi)) / (b - xi)      | f'(a) = f'(b)                            |
/// | meyers_2_4 | (f(b) - f(xi)) / (xi - a)      | f'(a) = f'(b)                            |
/// | meyers_2_5 | (f(xi) - f(a)) / (b - xi)      | f'(a) = f'(b)                            |
/// | meyers_2_6 | (f(b) - f(a)) / (xi - a)       | D (D - (b-a) f'(b)) < 0, D = f(b) - f(a) |
/// | meyers_2_7 | (f(b) - f(a)) / (b - xi)       | D (D - (b-a) f'(a)) < 0                  |
/// | meyers_2_8 | (f(xi) - f(a)) / (b - a)       | f'(a) (D - (b-a) f'(b)) > 0              |
/// | meyers_2_9 | (f(b) - f(xi)) / (b - a)       | f'(b) (D - (b-a) f'(a)) > 0              |
///
/// The search runs on the multiplied-through form, which has no singularity
/// at either endpoint.
enum class MeyersVariant {
    flett_2_2,
    meyers_2_3,
    meyers_2_4,
    meyers_2_5,
    meyers_2_6,
    meyers_2_7,
    meyers_2_8,
    meyers_2_9,
};

inline constexpr std::array<MeyersVariant, 8> kAllMeyersVariants{
    MeyersVariant::flett_2_2,  MeyersVariant::meyers_2_3, MeyersVariant::meyers_2_4,
    MeyersVariant::meyers_2_5, MeyersVariant::meyers_2_6, MeyersVariant::meyers_2_7,
    MeyersVariant::meyers_2_8, MeyersVariant::meyers_2_9,
};

TheoremId theorem_of(MeyersVariant v);

/// r(x) = f'(x)(x - a) - (f(x) - f(a)). Its roots are the Flett points.
ScalarFn flett_residual(const Expr& f, double a);

/// Multiplied-through residual of a variant on [a, b], with term magnitudes.
Residual meyers_residual(MeyersVariant v, const Expr& f, const Interval& iv);

/// Quotient form f'(xi) - rhs(xi), evaluated directly.
ResidualSample meyers_quotient_residual(MeyersVariant v, const Expr& f, const Interval& iv, double xi);

/// Whether the variant's sufficient hypothesis holds. Endpoint derivatives are
/// one-sided: the symbolic derivative evaluated at the endpoint; a missing one
/// makes the hypothesis false.
bool meyers_hypothesis(MeyersVariant v, const Expr& f, const Interval& iv, const SolverConfig& cfg);

TheoremResult find_flett_points(const Expr& f, const Interval& iv, const SolverConfig& cfg = {});

TheoremResult meyers_points(MeyersVariant v, const Expr& f, const Interval& iv,
                            const SolverConfig& cfg = {});

} // namespace mvtlab
