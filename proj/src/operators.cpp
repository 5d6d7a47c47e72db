#include "mvtlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvtlab/smoothness.hpp"

namespace mvtlab {

namespace {

const Interval kUnit{0.0, 1.0};

ResidualSample difference(double lhs, double rhs) {
    return {lhs - rhs, std::max(std::fabs(lhs), std::fabs(rhs))};
}

// g' must keep one strict sign on the closed grid.
void require_nonvanishing_derivative(const Expr& g, const Interval& iv, const SolverConfig& cfg,
                                     const char* name) {
    const Expr dg = differentiate(g);
    const int n = cfg.scan_points;
    std::vector<double> values(static_cast<std::size_t>(n));
    double largest = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = i + 1 == n ? iv.b() : iv.a() + iv.width() * i / (n - 1);
        const double v = dg(x);
        if (!std::isfinite(v)) {
            throw DomainError(std::string(name) + "' is not finite at x = " + std::to_string(x));
        }
        values[static_cast<std::size_t>(i)] = v;
        largest = std::max(largest, std::fabs(v));
    }
    const double band = cfg.residual_tol * std::max(1.0, largest);
    const bool positive = values.front() > 0.0;
    for (double v : values) {
        if (std::fabs(v) <= band || (v > 0.0) != positive) {
            throw DomainError(std::string(name) + "' vanishes on the interval");
        }
    }
}

void require_found(const TheoremResult& r, const char* what) {
    if (r.found()) return;
    const PointResult c = r.closest.value_or(PointResult{});
    throw NoRootFound(std::string("no sign change found for ") + what, c.xi, c.residual);
}

ScalarFn times(const Expr& u, const Expr& v) {
    return [u, v](double x) { return u(x) * v(x); };
}

// One Richardson-corrected Simpson step when it already meets tol on its own;
// the adaptive integrator otherwise. Most grid cells take the first branch.
double cell_integral(const ScalarFn& f, double l, double r, double tol) {
    const double h = r - l;
    const double f0 = f(l), f1 = f(l + 0.25 * h), f2 = f(l + 0.5 * h), f3 = f(l + 0.75 * h), f4 = f(r);
    if (std::isfinite(f0) && std::isfinite(f1) && std::isfinite(f2) && std::isfinite(f3) && std::isfinite(f4)) {
        const double coarse = h / 6.0 * (f0 + 4.0 * f2 + f4);
        const double fine = h / 12.0 * (f0 + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4);
        if (std::fabs(fine - coarse) <= tol) return fine + (fine - coarse) / 15.0;
    }
    return integrate(f, l, r, tol);
}

} // namespace

CumulativeIntegral::CumulativeIntegral(ScalarFn integrand, double lo, double hi,
                                       const SolverConfig& cfg)
    : integrand_(std::move(integrand)), lo_(lo), hi_(hi), quad_tol_(cfg.quad_tol) {
    cfg.validate();
    const int n = cfg.scan_points;
    nodes_.resize(static_cast<std::size_t>(n));
    prefix_.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        nodes_[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    }
    long double running = 0.0L;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        running += cell_integral(integrand_, nodes_[i - 1], nodes_[i], quad_tol_ / (n - 1));
        prefix_[i] = static_cast<double>(running);
    }
}

double CumulativeIntegral::operator()(double t) const {
    if (t <= lo_) return t == lo_ ? 0.0 : -integrate(integrand_, t, lo_, quad_tol_);
    if (t >= hi_) return prefix_.back() + integrate(integrand_, hi_, t, quad_tol_);
    const double step = (hi_ - lo_) / static_cast<double>(nodes_.size() - 1);
    auto k = static_cast<std::size_t>((t - lo_) / step);
    k = std::min(k, nodes_.size() - 2);
    while (k > 0 && nodes_[k] > t) --k;
    while (k + 2 < nodes_.size() && nodes_[k + 1] <= t) ++k;
    return prefix_[k] + cell_integral(integrand_, nodes_[k], t, quad_tol_ / static_cast<double>(nodes_.size() - 1));
}

OperatorValue::OperatorValue(ScalarFn pointwise, double coefficient, ScalarFn integrand,
                             const Interval& domain, const SolverConfig& cfg)
    : pointwise_(std::move(pointwise)),
      coefficient_(coefficient),
      integral_(std::make_shared<const CumulativeIntegral>(std::move(integrand), domain.a(),
                                                           domain.b(), cfg)) {}

double OperatorValue::operator()(double t) const {
    const double base = pointwise_ ? pointwise_(t) : 0.0;
    return base + coefficient_ * (*integral_)(t);
}

OperatorValue apply_T(const Expr& phi, const SolverConfig& cfg) {
    return OperatorValue(ScalarFn(phi), -1.0, ScalarFn(phi), kUnit, cfg);
}

OperatorValue apply_S(const Expr& psi, const SolverConfig& cfg) {
    const ScalarFn weighted = [psi](double x) { return x * psi(x); };
    return OperatorValue(weighted, -1.0, weighted, kUnit, cfg);
}

OperatorValue apply_V(const Expr& f, const SolverConfig& cfg, const Interval& domain) {
    return OperatorValue(nullptr, 1.0, ScalarFn(f), domain, cfg);
}

OperatorValue apply_V_weighted(const Expr& phi, const Expr& psi, const SolverConfig& cfg,
                               const Interval& domain) {
    return OperatorValue(nullptr, 1.0, times(phi, psi), domain, cfg);
}

LupuTriple lupu_4_6_points(const Expr& f, const Expr& g, const SolverConfig& cfg) {
    const double int_f = integrate(ScalarFn(f), 0.0, 1.0, cfg);
    const double int_g = integrate(ScalarFn(g), 0.0, 1.0, cfg);
    const OperatorValue tf = apply_T(f, cfg);
    const OperatorValue tg = apply_T(g, cfg);
    const OperatorValue sf = apply_S(f, cfg);
    const OperatorValue sg = apply_S(g, cfg);

    LupuTriple out{
        locate_points(TheoremId::lupu_t_pair,
                      [=](double x) { return difference(int_f * tg(x), int_g * tf(x)); }, kUnit, cfg),
        locate_points(TheoremId::lupu_t_equals_s,
                      [=](double x) { return difference(tf(x), sf(x)); }, kUnit, cfg),
        locate_points(TheoremId::lupu_s_pair,
                      [=](double x) { return difference(int_f * sg(x), int_g * sf(x)); }, kUnit, cfg),
    };
    require_found(out.first, "the first T identity");
    require_found(out.second, "the T = S identity");
    require_found(out.third, "the S identity");
    return out;
}

LupuPair lupu_4_7_points(const Expr& f, const Expr& g, const SolverConfig& cfg) {
    const auto one_minus_x = [](const Expr& u) {
        return ScalarFn([u](double x) { return (1.0 - x) * u(x); });
    };
    const double wf = integrate(one_minus_x(f), 0.0, 1.0, cfg);
    const double wg = integrate(one_minus_x(g), 0.0, 1.0, cfg);
    const OperatorValue tf = apply_T(f, cfg);
    const OperatorValue tg = apply_T(g, cfg);
    const OperatorValue sf = apply_S(f, cfg);
    const OperatorValue sg = apply_S(g, cfg);

    LupuPair out{
        locate_points(TheoremId::lupu_weighted_t,
                      [=](double x) { return difference(wf * tg(x), wg * tf(x)); }, kUnit, cfg),
        locate_points(TheoremId::lupu_weighted_s,
                      [=](double x) { return difference(wf * sg(x), wg * sf(x)); }, kUnit, cfg),
    };
    require_found(out.first, "the weighted T identity");
    require_found(out.second, "the weighted S identity");
    return out;
}

TheoremResult cauchy_flett_points(const Expr& f, const Expr& g, const Interval& iv,
                                  const SolverConfig& cfg) {
    require_nonvanishing_derivative(g, iv, cfg, "g");
    const Expr df = differentiate(f);
    const Expr dg = differentiate(g);
    const double fa = finite_value(f, iv.a(), "f(a)");
    const double ga = finite_value(g, iv.a(), "g(a)");
    finite_value(f, iv.b(), "f(b)");
    finite_value(g, iv.b(), "g(b)");

    const Residual r = [=](double x) {
        const double fx = f(x), gx = g(x), dfx = df(x), dgx = dg(x);
        // magnitude before the f(x) - f(a) cancellation
        const double magnitude = std::max(std::max(std::fabs(fx), std::fabs(fa)) * std::fabs(dgx),
                                          std::fabs(dfx) * std::max(std::fabs(gx), std::fabs(ga)));
        return ResidualSample{(fx - fa) * dgx - dfx * (gx - ga), magnitude};
    };
    const Smoothness sf = scan_smoothness(f, iv, cfg);
    const Smoothness sg = scan_smoothness(g, iv, cfg);
    SearchOptions options{Endpoints::open, sf.breakpoints};
    options.breakpoints.insert(options.breakpoints.end(), sg.breakpoints.begin(), sg.breakpoints.end());
    TheoremResult out = locate_points(TheoremId::cauchy_flett, r, iv, cfg, options);

    const auto dfa = endpoint_derivative(df, iv.a(), cfg);
    const auto dfb = endpoint_derivative(df, iv.b(), cfg);
    const auto dga = endpoint_derivative(dg, iv.a(), cfg);
    const auto dgb = endpoint_derivative(dg, iv.b(), cfg);
    out.hypothesis_satisfied = sf.differentiable && sg.differentiable && dfa && dfb && dga && dgb &&
                               nearly_equal(*dfa / *dga, *dfb / *dgb, cfg.residual_tol);
    return out;
}

TheoremResult thm_4_9_points(const Expr& f, const Expr& g, const Interval& iv,
                             const SolverConfig& cfg) {
    const double total = integrate(ScalarFn(f), iv.a(), iv.b(), cfg);
    const double mass = integrate([f](double x) { return std::fabs(f(x)); }, iv.a(), iv.b(), cfg);
    if (std::fabs(total) > cfg.quad_tol * std::max(1.0, mass)) {
        throw HypothesisError("the integral of f over [a, b] is not zero (" + std::to_string(total) + ")");
    }
    require_nonvanishing_derivative(g, iv, cfg, "g");
    const double ga = finite_value(g, iv.a(), "g(a)");
    const OperatorValue vgf = apply_V_weighted(g, f, cfg, iv);
    const OperatorValue vf = apply_V(f, cfg, iv);

    TheoremResult out = locate_points(
        TheoremId::volterra_null_mean, [=](double t) { return difference(vgf(t), ga * vf(t)); }, iv, cfg);
    return out;
}

TheoremResult thm_4_10_points(const Expr& f, const Expr& g, const Expr& phi,
                              const SolverConfig& cfg) {
    require_nonvanishing_derivative(phi, kUnit, cfg, "phi");
    const double int_f = integrate(ScalarFn(f), 0.0, 1.0, cfg);
    const double int_g = integrate(ScalarFn(g), 0.0, 1.0, cfg);
    const double phi0 = finite_value(phi, 0.0, "phi(0)");
    const OperatorValue vpf = apply_V_weighted(phi, f, cfg);
    const OperatorValue vpg = apply_V_weighted(phi, g, cfg);
    const OperatorValue vf = apply_V(f, cfg);
    const OperatorValue vg = apply_V(g, cfg);

    const Residual r = [=](double t) {
        const double terms[4] = {vpf(t) * int_g, vpg(t) * int_f, phi0 * vf(t) * int_g,
                                 phi0 * vg(t) * int_f};
        double magnitude = 0.0;
        for (double term : terms) magnitude = std::max(magnitude, std::fabs(term));
        return ResidualSample{terms[0] - terms[1] - (terms[2] - terms[3]), magnitude};
    };
    TheoremResult out = locate_points(TheoremId::volterra_weighted, r, kUnit, cfg);
    out.hypothesis_satisfied = phi0 == 0.0;
    return out;
}

namespace {

struct NormSetup {
    OperatorValue weighted_f;
    OperatorValue weighted_g;
    double norm2_f;
    double norm2_g;
};

NormSetup norm_setup(const Expr& f, const Expr& g, const Expr& phi, const SolverConfig& cfg) {
    require_nonvanishing_derivative(phi, kUnit, cfg, "phi");
    const double phi0 = finite_value(phi, 0.0, "phi(0)");
    if (std::fabs(phi0) > cfg.residual_tol) {
        throw HypothesisError("the weight must vanish at 0 (phi(0) = " + std::to_string(phi0) + ")");
    }
    const Expr f2 = pow(f, 2.0);
    const Expr g2 = pow(g, 2.0);
    return {apply_V_weighted(phi, f2, cfg), apply_V_weighted(phi, g2, cfg),
            integrate(ScalarFn(f2), 0.0, 1.0, cfg), integrate(ScalarFn(g2), 0.0, 1.0, cfg)};
}

} // namespace

TheoremResult weighted_norm_points(const Expr& f, const Expr& g, const Expr& phi,
                                   const SolverConfig& cfg) {
    const NormSetup s = norm_setup(f, g, phi, cfg);
    return locate_points(
        TheoremId::weighted_norm,
        [s](double t) { return difference(s.weighted_f(t) * s.norm2_g, s.weighted_g(t) * s.norm2_f); },
        kUnit, cfg);
}

WeightedNormPoint weighted_norm_point(const Expr& f, const Expr& g, const Expr& phi,
                                      const SolverConfig& cfg) {
    const NormSetup s = norm_setup(f, g, phi, cfg);
    const TheoremResult all = locate_points(
        TheoremId::weighted_norm,
        [s](double t) { return difference(s.weighted_f(t) * s.norm2_g, s.weighted_g(t) * s.norm2_f); },
        kUnit, cfg);
    require_found(all, "the weighted norm identity");

    const auto nearest = std::min_element(all.points.begin(), all.points.end(),
                                          [](const PointResult& l, const PointResult& r) {
                                              return std::fabs(l.xi - 0.5) < std::fabs(r.xi - 0.5);
                                          });
    WeightedNormPoint out;
    out.point = *nearest;
    out.weighted_norm_f = std::sqrt(std::fabs(s.weighted_f(out.point.xi)));
    out.weighted_norm_g = std::sqrt(std::fabs(s.weighted_g(out.point.xi)));
    out.norm_f = std::sqrt(s.norm2_f);
    out.norm_g = std::sqrt(s.norm2_g);
    return out;
}

} // namespace mvtlab
