#include "mvtlab/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mvtlab {

Smoothness scan_smoothness(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    cfg.validate();
    Smoothness out;
    const Expr df = differentiate(f);

    const double margin = cfg.endpoint_margin * iv.width();
    const double lo = iv.a() + margin;
    const double hi = iv.b() - margin;
    const int n = cfg.scan_points;
    double px = 0.0, pf = 0.0, pd = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
        const double x = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        const double fx = f(x);
        const double dfx = df(x);
        if (!std::isfinite(fx) || !std::isfinite(dfx) || std::fabs(dfx) > cfg.singular_threshold) {
            out.differentiable = false;
            out.breakpoints.push_back(x);
            have_prev = false;
            continue;
        }
        // A pole or jump between two samples: f' keeps one sign across the
        // cell but f moves the other way by a comparable amount.
        if (have_prev) {
            const double step = fx - pf;
            const double slope_span = 0.25 * (x - px) * std::min(std::fabs(pd), std::fabs(dfx));
            if (pd * dfx > 0.0 && step * dfx < 0.0 && std::fabs(step) >= slope_span &&
                std::fabs(step) > 1e-12 * std::max(std::fabs(fx), std::fabs(pf))) {
                out.differentiable = false;
                out.breakpoints.push_back(0.5 * (px + x));
            }
        }
        px = x;
        pf = fx;
        pd = dfx;
        have_prev = true;
    }

    for (const Expr& u : kink_arguments(f)) {
        if (!u.depends_on_x()) continue;
        ScanResult scan;
        try {
            scan = bracket_scan(ScalarFn(u), iv, cfg);
        } catch (const DomainError&) {
            continue;
        }
        for (const Bracket& br : scan.brackets) {
            out.differentiable = false;
            out.breakpoints.push_back(refine_root(ScalarFn(u), br.lo, br.hi, cfg));
        }
    }

    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()),
                          out.breakpoints.end());
    return out;
}

std::optional<double> endpoint_derivative(const Expr& df, double x, const SolverConfig& cfg) {
    const double v = df(x);
    if (!std::isfinite(v) || std::fabs(v) > cfg.singular_threshold) return std::nullopt;
    return v;
}

double finite_value(const Expr& f, double x, const char* what) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " is not finite at x = " + std::to_string(x));
    }
    return v;
}

} // namespace mvtlab
