#include "mvtlab/generalized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mvtlab/smoothness.hpp"

namespace mvtlab {

namespace {

double derivative_gap_slope(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const Expr df = differentiate(f);
    const auto dfa = endpoint_derivative(df, iv.a(), cfg);
    const auto dfb = endpoint_derivative(df, iv.b(), cfg);
    if (!dfa || !dfb) throw DomainError("f'(a) or f'(b) does not exist");
    return (*dfb - *dfa) / iv.width();
}

TheoremResult search(TheoremId id, const Residual& r, const Expr& f, const Interval& iv,
                     const SolverConfig& cfg, bool& differentiable) {
    finite_value(f, iv.a(), "f(a)");
    finite_value(f, iv.b(), "f(b)");
    const Smoothness smooth = scan_smoothness(f, iv, cfg);
    differentiable = smooth.differentiable;
    return locate_points(id, r, iv, cfg, {Endpoints::open, smooth.breakpoints});
}

bool endpoint_derivatives_match(const Expr& dn, const Interval& iv, const SolverConfig& cfg) {
    const auto at_a = endpoint_derivative(dn, iv.a(), cfg);
    const auto at_b = endpoint_derivative(dn, iv.b(), cfg);
    return at_a && at_b && nearly_equal(*at_a, *at_b, cfg.residual_tol);
}

} // namespace

Residual riedel_sahoo_residual(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const double k = derivative_gap_slope(f, iv, cfg);
    const Expr df = differentiate(f);
    const double a = iv.a();
    const double fa = f(a);
    return [f, df, a, fa, k](double x) {
        const double fx = f(x);
        const double tangent = (x - a) * df(x);
        const double correction = 0.5 * k * (x - a) * (x - a);
        return ResidualSample{fx - fa - tangent + correction,
                              std::max({std::fabs(fx), std::fabs(fa), std::fabs(tangent),
                                        std::fabs(correction)})};
    };
}

Residual cakmak_tiryaki_residual(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const double k = derivative_gap_slope(f, iv, cfg);
    const Expr df = differentiate(f);
    const double b = iv.b();
    const double fb = f(b);
    return [f, df, b, fb, k](double x) {
        const double fx = f(x);
        const double tangent = (b - x) * df(x);
        const double correction = 0.5 * k * (b - x) * (b - x);
        return ResidualSample{fb - fx - tangent - correction,
                              std::max({std::fabs(fx), std::fabs(fb), std::fabs(tangent),
                                        std::fabs(correction)})};
    };
}

Residual second_order_residual(Anchor anchor, const Expr& f, const Interval& iv) {
    const Expr d1 = differentiate(f);
    const Expr d2 = differentiate(f, 2);
    const double a = iv.a();
    const double b = iv.b();
    const double fa = f(a);
    const double fb = f(b);
    return [=](double x) {
        const double fx = f(x);
        const double h = anchor == Anchor::a ? x - a : b - x;
        const double tangent = h * d1(x);
        const double curvature = 0.5 * h * h * d2(x);
        const double gap = anchor == Anchor::a ? fx - fa : fb - fx;
        const double magnitude = std::max({std::fabs(fx), std::fabs(anchor == Anchor::a ? fa : fb),
                                           std::fabs(tangent), std::fabs(curvature)});
        return ResidualSample{anchor == Anchor::a ? gap - tangent + curvature : gap - tangent - curvature,
                              magnitude};
    };
}

Residual pawlikowska_residual(const Expr& f, const Interval& iv, int n) {
    if (n < 1 || n > kMaxPawlikowskaOrder) {
        throw std::invalid_argument("pawlikowska order must be in [1, " +
                                    std::to_string(kMaxPawlikowskaOrder) + "]");
    }
    std::vector<Expr> derivatives;
    derivatives.reserve(static_cast<std::size_t>(n));
    Expr d = f;
    for (int i = 1; i <= n; ++i) {
        d = differentiate(d);
        derivatives.push_back(d);
    }
    const double a = iv.a();
    const double fa = f(a);
    return [f, derivatives, a, fa](double x) {
        const double fx = f(x);
        const double h = x - a;
        double sum = 0.0;
        double magnitude = std::max(std::fabs(fx), std::fabs(fa));
        double coeff = 1.0;  // h^i / i!
        for (std::size_t i = 0; i < derivatives.size(); ++i) {
            coeff *= h / static_cast<double>(i + 1);
            const double term = coeff * derivatives[i](x);
            sum += i % 2 == 0 ? term : -term;
            magnitude = std::max(magnitude, std::fabs(term));
        }
        return ResidualSample{fx - fa - sum, magnitude};
    };
}

TheoremResult riedel_sahoo_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    bool differentiable = true;
    TheoremResult out =
        search(TheoremId::riedel_sahoo, riedel_sahoo_residual(f, iv, cfg), f, iv, cfg, differentiable);
    out.hypothesis_satisfied = differentiable;
    return out;
}

TheoremResult cakmak_tiryaki_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    bool differentiable = true;
    TheoremResult out = search(TheoremId::cakmak_tiryaki, cakmak_tiryaki_residual(f, iv, cfg), f, iv,
                               cfg, differentiable);
    out.hypothesis_satisfied = differentiable;
    return out;
}

TheoremResult second_order_points(Anchor anchor, const Expr& f, const Interval& iv,
                                  const SolverConfig& cfg) {
    const TheoremId id = anchor == Anchor::a ? TheoremId::second_order_a : TheoremId::second_order_b;
    bool differentiable = true;
    TheoremResult out = search(id, second_order_residual(anchor, f, iv), f, iv, cfg, differentiable);
    out.hypothesis_satisfied =
        differentiable && endpoint_derivatives_match(differentiate(f, 2), iv, cfg);
    return out;
}

TheoremResult pawlikowska_points(const Expr& f, const Interval& iv, int n, const SolverConfig& cfg) {
    const Residual r = pawlikowska_residual(f, iv, n);
    bool differentiable = true;
    TheoremResult out = search(TheoremId::pawlikowska, r, f, iv, cfg, differentiable);
    out.hypothesis_satisfied =
        differentiable && endpoint_derivatives_match(differentiate(f, n), iv, cfg);
    return out;
}

} // namespace mvtlab
