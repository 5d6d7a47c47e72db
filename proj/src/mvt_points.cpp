#include "mvtlab/mvt_points.hpp"

#include <algorithm>
#include <cmath>

#include "mvtlab/smoothness.hpp"

namespace mvtlab {

TheoremResult rolle_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const Expr df = differentiate(f);
    const Smoothness smooth = scan_smoothness(f, iv, cfg);
    const double fa = f(iv.a());
    const double fb = f(iv.b());

    const Residual r = [&df](double x) {
        const double v = df(x);
        return ResidualSample{v, std::fabs(v)};
    };
    TheoremResult out = locate_points(TheoremId::rolle, r, iv, cfg, {Endpoints::open, smooth.breakpoints});
    out.hypothesis_satisfied = smooth.differentiable && std::isfinite(fa) && std::isfinite(fb) &&
                               nearly_equal(fa, fb, cfg.residual_tol);
    return out;
}

TheoremResult lagrange_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const Expr df = differentiate(f);
    const Smoothness smooth = scan_smoothness(f, iv, cfg);
    const double slope =
        (finite_value(f, iv.b(), "f(b)") - finite_value(f, iv.a(), "f(a)")) / iv.width();

    const Residual r = [&df, slope](double x) {
        const double d = df(x);
        return ResidualSample{d - slope, std::max(std::fabs(d), std::fabs(slope))};
    };
    TheoremResult out =
        locate_points(TheoremId::lagrange, r, iv, cfg, {Endpoints::open, smooth.breakpoints});
    out.hypothesis_satisfied = smooth.differentiable;
    return out;
}

TheoremResult cauchy_points(const Expr& f, const Expr& g, const Interval& iv,
                            const SolverConfig& cfg) {
    const Expr df = differentiate(f);
    const Expr dg = differentiate(g);
    const Smoothness sf = scan_smoothness(f, iv, cfg);
    const Smoothness sg = scan_smoothness(g, iv, cfg);
    const double delta_f = finite_value(f, iv.b(), "f(b)") - finite_value(f, iv.a(), "f(a)");
    const double delta_g = finite_value(g, iv.b(), "g(b)") - finite_value(g, iv.a(), "g(a)");

    const Residual r = [&](double x) {
        const double lhs = df(x) * delta_g;
        const double rhs = dg(x) * delta_f;
        return ResidualSample{lhs - rhs, std::max(std::fabs(lhs), std::fabs(rhs))};
    };
    SearchOptions options{Endpoints::open, sf.breakpoints};
    options.breakpoints.insert(options.breakpoints.end(), sg.breakpoints.begin(), sg.breakpoints.end());
    TheoremResult out = locate_points(TheoremId::cauchy, r, iv, cfg, options);
    out.hypothesis_satisfied = sf.differentiable && sg.differentiable;
    return out;
}

TheoremResult integral_mvt_points(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    cfg.validate();
    const int n = cfg.scan_points;
    for (int i = 0; i < n; ++i) {
        const double x = i + 1 == n ? iv.b() : iv.a() + iv.width() * i / (n - 1);
        finite_value(f, x, "f");
    }
    const double mean = integrate(ScalarFn(f), iv.a(), iv.b(), cfg) / iv.width();

    const Residual r = [&f, mean](double x) {
        const double v = f(x);
        return ResidualSample{v - mean, std::max(std::fabs(v), std::fabs(mean))};
    };
    // The theorem places the point in the closed interval.
    return locate_points(TheoremId::integral_mvt, r, iv, cfg, {Endpoints::closed, {}});
}

} // namespace mvtlab
