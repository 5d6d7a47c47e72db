#include "mvtlab/flett.hpp"

#include <algorithm>
#include <cmath>

#include "mvtlab/smoothness.hpp"

namespace mvtlab {

namespace {

struct Ends {
    double fa, fb;
    std::optional<double> dfa, dfb;
};

Ends endpoint_data(const Expr& f, const Expr& df, const Interval& iv, const SolverConfig& cfg) {
    return {f(iv.a()), f(iv.b()), endpoint_derivative(df, iv.a(), cfg),
            endpoint_derivative(df, iv.b(), cfg)};
}

// Strict sign test for a product p of two factors, with the tolerance band
// scaled by the factor magnitudes.
bool strictly_positive(double p, double scale, const SolverConfig& cfg) {
    return p > cfg.residual_tol * std::max(1.0, scale);
}

} // namespace

TheoremId theorem_of(MeyersVariant v) {
    switch (v) {
    case MeyersVariant::flett_2_2: return TheoremId::flett;
    case MeyersVariant::meyers_2_3: return TheoremId::meyers_2_3;
    case MeyersVariant::meyers_2_4: return TheoremId::meyers_2_4;
    case MeyersVariant::meyers_2_5: return TheoremId::meyers_2_5;
    case MeyersVariant::meyers_2_6: return TheoremId::meyers_2_6;
    case MeyersVariant::meyers_2_7: return TheoremId::meyers_2_7;
    case MeyersVariant::meyers_2_8: return TheoremId::meyers_2_8;
    case MeyersVariant::meyers_2_9: return TheoremId::meyers_2_9;
    }
    return TheoremId::flett;
}

ScalarFn flett_residual(const Expr& f, double a) {
    const Expr df = differentiate(f);
    const double fa = f(a);
    return [f, df, a, fa](double x) { return df(x) * (x - a) - (f(x) - fa); };
}

Residual meyers_residual(MeyersVariant v, const Expr& f, const Interval& iv) {
    const Expr df = differentiate(f);
    const double a = iv.a();
    const double b = iv.b();
    const double fa = f(a);
    const double fb = f(b);
    return [v, f, df, a, b, fa, fb](double x) {
        const double fx = f(x);
        const double d = df(x);
        double multiplier = 0.0;
        double top = 0.0;
        switch (v) {
        case MeyersVariant::flett_2_2: multiplier = x - a; top = fx - fa; break;
        case MeyersVariant::meyers_2_3: multiplier = b - x; top = fb - fx; break;
        case MeyersVariant::meyers_2_4: multiplier = x - a; top = fb - fx; break;
        case MeyersVariant::meyers_2_5: multiplier = b - x; top = fx - fa; break;
        case MeyersVariant::meyers_2_6: multiplier = x - a; top = fb - fa; break;
        case MeyersVariant::meyers_2_7: multiplier = b - x; top = fb - fa; break;
        case MeyersVariant::meyers_2_8: multiplier = b - a; top = fx - fa; break;
        case MeyersVariant::meyers_2_9: multiplier = b - a; top = fb - fx; break;
        }
        const double lhs = d * multiplier;
        const double magnitude =
            std::max({std::fabs(lhs), std::fabs(fx), std::fabs(fa), std::fabs(fb)});
        return ResidualSample{lhs - top, magnitude};
    };
}

ResidualSample meyers_quotient_residual(MeyersVariant v, const Expr& f, const Interval& iv,
                                        double xi) {
    const double a = iv.a();
    const double b = iv.b();
    const double fa = f(a);
    const double fb = f(b);
    const double fx = f(xi);
    const double d = differentiate(f)(xi);
    double rhs = 0.0;
    switch (v) {
    case MeyersVariant::flett_2_2: rhs = (fx - fa) / (xi - a); break;
    case MeyersVariant::meyers_2_3: rhs = (fb - fx) / (b - xi); break;
    case MeyersVariant::meyers_2_4: rhs = (fb - fx) / (xi - a); break;
    case MeyersVariant::meyers_2_5: rhs = (fx - fa) / (b - xi); break;
    case MeyersVariant::meyers_2_6: rhs = (fb - fa) / (xi - a); break;
    case MeyersVariant::meyers_2_7: rhs = (fb - fa) / (b - xi); break;
    case MeyersVariant::meyers_2_8: rhs = (fx - fa) / (b - a); break;
    case MeyersVariant::meyers_2_9: rhs = (fb - fx) / (b - a); break;
    }
    return {d - rhs, std::max(std::fabs(d), std::fabs(rhs))};
}

bool meyers_hypothesis(MeyersVariant v, const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const Expr df = differentiate(f);
    const Ends e = endpoint_data(f, df, iv, cfg);
    if (!e.dfa || !e.dfb || !std::isfinite(e.fa) || !std::isfinite(e.fb)) return false;
    if (!scan_smoothness(f, iv, cfg).differentiable) return false;

    const double w = iv.width();
    const double delta = e.fb - e.fa;
    switch (v) {
    case MeyersVariant::flett_2_2:
    case MeyersVariant::meyers_2_3:
    case MeyersVariant::meyers_2_4:
    case MeyersVariant::meyers_2_5:
        return nearly_equal(*e.dfa, *e.dfb, cfg.residual_tol);
    case MeyersVariant::meyers_2_6: {
        const double other = delta - w * *e.dfb;
        const double scale = std::fabs(delta) * std::max(std::fabs(delta), std::fabs(w * *e.dfb));
        return strictly_positive(-delta * other, scale, cfg);
    }
    case MeyersVariant::meyers_2_7: {
        const double other = delta - w * *e.dfa;
        const double scale = std::fabs(delta) * std::max(std::fabs(delta), std::fabs(w * *e.dfa));
        return strictly_positive(-delta * other, scale, cfg);
    }
    case MeyersVariant::meyers_2_8: {
        const double other = delta - w * *e.dfb;
        const double scale = std::fabs(*e.dfa) * std::max(std::fabs(delta), std::fabs(w * *e.dfb));
        return strictly_positive(*e.dfa * other, scale, cfg);
    }
    case MeyersVariant::meyers_2_9: {
        const double other = delta - w * *e.dfa;
        const double scale = std::fabs(*e.dfb) * std::max(std::fabs(delta), std::fabs(w * *e.dfa));
        return strictly_positive(*e.dfb * other, scale, cfg);
    }
    }
    return false;
}

TheoremResult meyers_points(MeyersVariant v, const Expr& f, const Interval& iv,
                            const SolverConfig& cfg) {
    finite_value(f, iv.a(), "f(a)");
    finite_value(f, iv.b(), "f(b)");
    const Smoothness smooth = scan_smoothness(f, iv, cfg);
    TheoremResult out = locate_points(theorem_of(v), meyers_residual(v, f, iv), iv, cfg,
                                      {Endpoints::open, smooth.breakpoints});
    out.hypothesis_satisfied = meyers_hypothesis(v, f, iv, cfg);
    return out;
}

TheoremResult find_flett_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    return meyers_points(MeyersVariant::flett_2_2, f, iv, cfg);
}

} // namespace mvtlab
