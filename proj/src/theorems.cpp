#include "mvtlab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "mvtlab/flett.hpp"
#include "mvtlab/generalized.hpp"
#include "mvtlab/mvt_points.hpp"
#include "mvtlab/operators.hpp"

namespace mvtlab {

namespace {

std::optional<MeyersVariant> meyers_of(TheoremId id) {
    for (MeyersVariant v : kAllMeyersVariants) {
        if (theorem_of(v) == id) return v;
    }
    return std::nullopt;
}

const Expr& second(const Problem& p) {
    if (!p.g) {
        throw std::invalid_argument(std::string(to_string(p.theorem)) + " needs a second function g");
    }
    return *p.g;
}

const Expr& weight(const Problem& p) {
    if (!p.weight) {
        throw std::invalid_argument(std::string(to_string(p.theorem)) + " needs a weight function");
    }
    return *p.weight;
}

double max_abs(std::initializer_list<double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

Verification judge(double residual, double scale, double tol, double residual_scale) {
    Verification v;
    v.residual = residual;
    v.scale = std::max({1.0, scale, residual_scale});
    v.tolerance = tol * v.scale;
    v.ok = std::isfinite(residual) && std::fabs(residual) <= v.tolerance;
    return v;
}

} // namespace

bool needs_second_function(TheoremId id) {
    switch (id) {
    case TheoremId::cauchy:
    case TheoremId::cauchy_flett:
    case TheoremId::volterra_null_mean:
    case TheoremId::volterra_weighted:
    case TheoremId::weighted_norm:
    case TheoremId::lupu_t_pair:
    case TheoremId::lupu_t_equals_s:
    case TheoremId::lupu_s_pair:
    case TheoremId::lupu_weighted_t:
    case TheoremId::lupu_weighted_s: return true;
    default: return false;
    }
}

bool needs_weight(TheoremId id) {
    return id == TheoremId::volterra_weighted || id == TheoremId::weighted_norm;
}

bool fixed_unit_interval(TheoremId id) {
    switch (id) {
    case TheoremId::volterra_weighted:
    case TheoremId::weighted_norm:
    case TheoremId::lupu_t_pair:
    case TheoremId::lupu_t_equals_s:
    case TheoremId::lupu_s_pair:
    case TheoremId::lupu_weighted_t:
    case TheoremId::lupu_weighted_s: return true;
    default: return false;
    }
}

std::vector<TheoremResult> solve(const Problem& p, const SolverConfig& cfg) {
    cfg.validate();
    const Interval& iv = p.interval;
    if (fixed_unit_interval(p.theorem) && (iv.a() != 0.0 || iv.b() != 1.0)) {
        throw std::invalid_argument(std::string(to_string(p.theorem)) + " is stated on [0, 1] only");
    }
    if (const auto v = meyers_of(p.theorem)) return {meyers_points(*v, p.f, iv, cfg)};

    switch (p.theorem) {
    case TheoremId::rolle: return {rolle_points(p.f, iv, cfg)};
    case TheoremId::lagrange: return {lagrange_points(p.f, iv, cfg)};
    case TheoremId::cauchy: return {cauchy_points(p.f, second(p), iv, cfg)};
    case TheoremId::integral_mvt: return {integral_mvt_points(p.f, iv, cfg)};
    case TheoremId::riedel_sahoo: return {riedel_sahoo_points(p.f, iv, cfg)};
    case TheoremId::cakmak_tiryaki: return {cakmak_tiryaki_points(p.f, iv, cfg)};
    case TheoremId::second_order_a: return {second_order_points(Anchor::a, p.f, iv, cfg)};
    case TheoremId::second_order_b: return {second_order_points(Anchor::b, p.f, iv, cfg)};
    case TheoremId::pawlikowska: return {pawlikowska_points(p.f, iv, p.order, cfg)};
    case TheoremId::cauchy_flett: return {cauchy_flett_points(p.f, second(p), iv, cfg)};
    case TheoremId::volterra_null_mean: return {thm_4_9_points(p.f, second(p), iv, cfg)};
    case TheoremId::volterra_weighted: return {thm_4_10_points(p.f, second(p), weight(p), cfg)};
    case TheoremId::weighted_norm: {
        const WeightedNormPoint w = weighted_norm_point(p.f, second(p), weight(p), cfg);
        TheoremResult r;
        r.theorem = TheoremId::weighted_norm;
        r.degenerate = w.point.degenerate;
        r.points.push_back(w.point);
        return {r};
    }
    case TheoremId::lupu_t_pair:
    case TheoremId::lupu_t_equals_s:
    case TheoremId::lupu_s_pair: {
        LupuTriple t = lupu_4_6_points(p.f, second(p), cfg);
        return {std::move(t.first), std::move(t.second), std::move(t.third)};
    }
    case TheoremId::lupu_weighted_t:
    case TheoremId::lupu_weighted_s: {
        LupuPair t = lupu_4_7_points(p.f, second(p), cfg);
        return {std::move(t.first), std::move(t.second)};
    }
    default: break;
    }
    throw std::invalid_argument("unsupported theorem");
}

Verification verify(const Problem& p, TheoremId id, double xi, const SolverConfig& cfg,
                    double residual_scale) {
    const Interval& iv = p.interval;
    const double a = iv.a();
    const double b = iv.b();
    const Expr& f = p.f;
    const double fine = cfg.quad_tol / 100.0;
    const double integral_tol = 100.0 * cfg.quad_tol;
    auto integral = [fine](const ScalarFn& h, double lo, double hi) { return integrate(h, lo, hi, fine); };
    auto df = [&f](double x) { return differentiate(f)(x); };

    if (const auto v = meyers_of(id)) {
        const ResidualSample s = meyers_quotient_residual(*v, f, iv, xi);
        return judge(s.value, s.magnitude, cfg.residual_tol, residual_scale);
    }

    switch (id) {
    case TheoremId::rolle: {
        const double d = df(xi);
        return judge(d, std::fabs(d), cfg.residual_tol, residual_scale);
    }
    case TheoremId::lagrange: {
        const double d = df(xi);
        const double slope = (f(b) - f(a)) / (b - a);
        return judge(d - slope, max_abs({d, slope}), cfg.residual_tol, residual_scale);
    }
    case TheoremId::cauchy: {
        const Expr& g = second(p);
        const double lhs = df(xi) * (g(b) - g(a));
        const double rhs = differentiate(g)(xi) * (f(b) - f(a));
        return judge(lhs - rhs, max_abs({lhs, rhs}), cfg.residual_tol, residual_scale);
    }
    case TheoremId::integral_mvt: {
        const double lhs = integral(ScalarFn(f), a, b);
        const double rhs = f(xi) * (b - a);
        return judge(lhs - rhs, max_abs({lhs, rhs}), integral_tol, residual_scale);
    }
    case TheoremId::riedel_sahoo:
    case TheoremId::cakmak_tiryaki: {
        const Expr d1 = differentiate(f);
        const double k = (d1(b) - d1(a)) / (b - a);
        const double h = id == TheoremId::riedel_sahoo ? xi - a : b - xi;
        const double lhs = id == TheoremId::riedel_sahoo ? f(xi) - f(a) : f(b) - f(xi);
        const double rhs = id == TheoremId::riedel_sahoo ? h * d1(xi) - 0.5 * k * h * h
                                                          : h * d1(xi) + 0.5 * k * h * h;
        return judge(lhs - rhs, max_abs({f(xi), f(a), f(b), h * d1(xi), 0.5 * k * h * h}),
                     cfg.residual_tol, residual_scale);
    }
    case TheoremId::second_order_a:
    case TheoremId::second_order_b:
    case TheoremId::pawlikowska: {
        const bool at_a = id != TheoremId::second_order_b;
        const int n = id == TheoremId::pawlikowska ? p.order : 2;
        const double h = at_a ? xi - a : b - xi;
        const double lhs = at_a ? f(xi) - f(a) : f(b) - f(xi);
        double rhs = 0.0;
        double scale = max_abs({f(xi), f(a), f(b)});
        Expr d = f;
        for (int i = 1; i <= n; ++i) {
            d = differentiate(d);
            const double term = std::pow(h, i) / std::tgamma(i + 1.0) * d(xi);
            rhs += (at_a && i % 2 == 0 ? -term : term);
            scale = std::max(scale, std::fabs(term));
        }
        return judge(lhs - rhs, scale, cfg.residual_tol, residual_scale);
    }
    case TheoremId::cauchy_flett: {
        const Expr& g = second(p);
        const double ratio = (f(xi) - f(a)) / (g(xi) - g(a));
        const double slope_ratio = df(xi) / differentiate(g)(xi);
        return judge(ratio - slope_ratio, max_abs({ratio, slope_ratio}), cfg.residual_tol,
                     residual_scale);
    }
    case TheoremId::volterra_null_mean: {
        const Expr& g = second(p);
        const double lhs = integral([&](double x) { return f(x) * g(x); }, a, xi);
        const double rhs = g(a) * integral(ScalarFn(f), a, xi);
        return judge(lhs - rhs, max_abs({lhs, rhs}), integral_tol, residual_scale);
    }
    case TheoremId::volterra_weighted: {
        const Expr& g = second(p);
        const Expr& phi = weight(p);
        const double int_f = integral(ScalarFn(f), 0.0, 1.0);
        const double int_g = integral(ScalarFn(g), 0.0, 1.0);
        const double vpf = integral([&](double x) { return phi(x) * f(x); }, 0.0, xi);
        const double vpg = integral([&](double x) { return phi(x) * g(x); }, 0.0, xi);
        const double vf = integral(ScalarFn(f), 0.0, xi);
        const double vg = integral(ScalarFn(g), 0.0, xi);
        const double lhs = vpf * int_g - vpg * int_f;
        const double rhs = phi(0.0) * (vf * int_g - vg * int_f);
        return judge(lhs - rhs, max_abs({vpf * int_g, vpg * int_f, rhs}), integral_tol, residual_scale);
    }
    case TheoremId::weighted_norm: {
        const Expr& g = second(p);
        const Expr& phi = weight(p);
        const double nf = integral([&](double x) { return f(x) * f(x); }, 0.0, 1.0);
        const double ng = integral([&](double x) { return g(x) * g(x); }, 0.0, 1.0);
        const double wf = integral([&](double x) { return f(x) * f(x) * phi(x); }, 0.0, xi);
        const double wg = integral([&](double x) { return g(x) * g(x) * phi(x); }, 0.0, xi);
        return judge(wf * ng - wg * nf, max_abs({wf * ng, wg * nf}), integral_tol, residual_scale);
    }
    case TheoremId::lupu_t_pair:
    case TheoremId::lupu_t_equals_s:
    case TheoremId::lupu_s_pair:
    case TheoremId::lupu_weighted_t:
    case TheoremId::lupu_weighted_s: {
        const Expr& g = second(p);
        auto t_op = [&](const Expr& u) { return u(xi) - integral(ScalarFn(u), 0.0, xi); };
        auto s_op = [&](const Expr& u) {
            return xi * u(xi) - integral([&](double x) { return x * u(x); }, 0.0, xi);
        };
        double lhs = 0.0;
        double rhs = 0.0;
        if (id == TheoremId::lupu_t_equals_s) {
            lhs = t_op(f);
            rhs = s_op(f);
        } else {
            const bool weighted = id == TheoremId::lupu_weighted_t || id == TheoremId::lupu_weighted_s;
            auto constant = [&](const Expr& u) {
                return weighted ? integral([&](double x) { return (1.0 - x) * u(x); }, 0.0, 1.0)
                                : integral(ScalarFn(u), 0.0, 1.0);
            };
            const bool uses_t = id == TheoremId::lupu_t_pair || id == TheoremId::lupu_weighted_t;
            lhs = constant(f) * (uses_t ? t_op(g) : s_op(g));
            rhs = constant(g) * (uses_t ? t_op(f) : s_op(f));
        }
        return judge(lhs - rhs, max_abs({lhs, rhs}), integral_tol, residual_scale);
    }
    default: break;
    }
    throw std::invalid_argument("unsupported theorem");
}

} // namespace mvtlab
