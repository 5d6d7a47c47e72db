#include "mvtlab/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mvtlab/flett.hpp"
#include "mvtlab/smoothness.hpp"

namespace mvtlab {

namespace {

constexpr std::array<std::pair<std::string_view, Verdict>, 4> kVerdictNames{{
    {"Satisfied", Verdict::satisfied},
    {"NotSatisfied", Verdict::not_satisfied},
    {"Boundary", Verdict::boundary},
    {"NotApplicable", Verdict::not_applicable},
}};

struct EndpointSlopes {
    double fa, fb, dfa, dfb;
};

// Endpoint values and one-sided derivatives, or nothing if f is not
// differentiable on [a, b] in the sense the conditions need.
std::optional<EndpointSlopes> slopes(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    if (!scan_smoothness(f, iv, cfg).differentiable) return std::nullopt;
    const Expr df = differentiate(f);
    const auto dfa = endpoint_derivative(df, iv.a(), cfg);
    const auto dfb = endpoint_derivative(df, iv.b(), cfg);
    const double fa = f(iv.a());
    const double fb = f(iv.b());
    if (!dfa || !dfb || !std::isfinite(fa) || !std::isfinite(fb)) return std::nullopt;
    return EndpointSlopes{fa, fb, *dfa, *dfb};
}

// Verdict for the strict condition `product < 0`.
Verdict strict_negative(double product, double scale, const SolverConfig& cfg) {
    const double band = cfg.residual_tol * std::max(1.0, scale);
    if (!std::isfinite(product)) return Verdict::not_applicable;
    if (std::fabs(product) <= band) return Verdict::boundary;
    return product < 0.0 ? Verdict::satisfied : Verdict::not_satisfied;
}

struct TrahanOutcome {
    Verdict verdict;
    bool boundary;
};

TrahanOutcome trahan_outcome(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const auto s = slopes(f, iv, cfg);
    if (!s) return {Verdict::not_applicable, false};
    const double secant = (s->fb - s->fa) / iv.width();
    const double product = (s->dfb - secant) * (s->dfa - secant);
    const double scale = std::max(std::fabs(s->dfb), std::fabs(secant)) *
                         std::max(std::fabs(s->dfa), std::fabs(secant));
    const double band = cfg.residual_tol * std::max(1.0, scale);
    if (std::fabs(product) <= band) {
        // f'(a) = secant still forces an interior point; f'(b) = secant alone
        // allows the only Flett point to be b itself.
        const bool at_a = std::fabs(s->dfa - secant) <= std::fabs(s->dfb - secant);
        return {at_a ? Verdict::satisfied : Verdict::boundary, true};
    }
    return {product > 0.0 ? Verdict::satisfied : Verdict::not_satisfied, false};
}

} // namespace

std::string_view to_string(Verdict v) {
    for (const auto& [name, verdict] : kVerdictNames) {
        if (verdict == v) return name;
    }
    return "?";
}

std::optional<Verdict> verdict_from_string(std::string_view s) {
    for (const auto& [name, verdict] : kVerdictNames) {
        if (name == s) return verdict;
    }
    return std::nullopt;
}

Verdict check_flett_condition(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const auto s = slopes(f, iv, cfg);
    if (!s) return Verdict::not_applicable;
    return nearly_equal(s->dfa, s->dfb, cfg.residual_tol) ? Verdict::satisfied : Verdict::not_satisfied;
}

std::optional<double> trahan_product(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const auto s = slopes(f, iv, cfg);
    if (!s) return std::nullopt;
    const double secant = (s->fb - s->fa) / iv.width();
    return (s->dfb - secant) * (s->dfa - secant);
}

Verdict check_trahan(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    return trahan_outcome(f, iv, cfg).verdict;
}

Means tong_means(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const double fa = finite_value(f, iv.a(), "f(a)");
    const double fb = finite_value(f, iv.b(), "f(b)");
    const double integral = integrate(ScalarFn(f), iv.a(), iv.b(), cfg);
    return {0.5 * (fa + fb), integral / iv.width()};
}

Verdict check_tong(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    if (!std::isfinite(f(iv.a())) || !std::isfinite(f(iv.b()))) return Verdict::not_applicable;
    if (!scan_smoothness(f, iv, cfg).differentiable) return Verdict::not_applicable;
    const Means m = tong_means(f, iv, cfg);
    const double scale =
        std::max({1.0, std::fabs(f(iv.a())), std::fabs(f(iv.b())), std::fabs(m.integral)});
    const double band = std::max(cfg.quad_tol, cfg.residual_tol) * scale;
    return std::fabs(m.arithmetic - m.integral) <= band ? Verdict::satisfied : Verdict::not_satisfied;
}

ScalarFn phi1(const Expr& f, double a) {
    const double fa = f(a);
    const double dfa = differentiate(f)(a);
    return [f, a, fa, dfa](double x) {
        if (x == a) return 0.0;
        return (f(x) - fa) / (x - a) - dfa;
    };
}

ScalarFn phi1_prime(const Expr& f, double a) {
    const Expr df = differentiate(f);
    const double fa = f(a);
    return [f, df, a, fa](double x) {
        const double h = x - a;
        return (df(x) - (f(x) - fa) / h) / h;
    };
}

std::optional<double> phi1_prime_at_a(const Expr& f, double a, const SolverConfig& cfg) {
    const double d2 = differentiate(f, 2)(a);
    if (std::isfinite(d2) && std::fabs(d2) <= cfg.singular_threshold) return 0.5 * d2;
    try {
        const double fd = central_diff(ScalarFn(f), a, 2);
        if (std::isfinite(fd)) return 0.5 * fd;
    } catch (const DomainError&) {
    }
    return std::nullopt;
}

MalesevicVerdicts check_malesevic(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    const MalesevicVerdicts na{Verdict::not_applicable, Verdict::not_applicable};
    const auto s = slopes(f, iv, cfg);
    if (!s) return na;
    const double w = iv.width();
    const double secant = (s->fb - s->fa) / w;
    const double phi_b = secant - s->dfa;
    const double phi_prime_b = (s->dfb - secant) / w;
    const double phi_b_scale = std::max(std::fabs(secant), std::fabs(s->dfa));
    const double phi_prime_b_scale = std::max(std::fabs(s->dfb), std::fabs(secant)) / w;

    MalesevicVerdicts out = na;
    out.t1 = strict_negative(phi_prime_b * phi_b, phi_prime_b_scale * phi_b_scale, cfg);
    if (const auto phi_prime_a = phi1_prime_at_a(f, iv.a(), cfg)) {
        out.m1 = strict_negative(*phi_prime_a * phi_b, std::fabs(*phi_prime_a) * phi_b_scale, cfg);
    }
    return out;
}

ConditionVector classify(const Expr& f, const Interval& iv, const SolverConfig& cfg) {
    ConditionVector v;
    v.flett = check_flett_condition(f, iv, cfg);
    const TrahanOutcome trahan = trahan_outcome(f, iv, cfg);
    v.trahan = trahan.verdict;
    v.trahan_boundary = trahan.boundary;
    try {
        v.tong = check_tong(f, iv, cfg);
        if (std::isfinite(f(iv.a())) && std::isfinite(f(iv.b()))) {
            const Means m = tong_means(f, iv, cfg);
            v.m_of_f = m.arithmetic;
            v.i_of_f = m.integral;
        }
    } catch (const QuadratureError&) {
        v.tong = Verdict::not_applicable;
    } catch (const DomainError&) {
        v.tong = Verdict::not_applicable;
    }
    const MalesevicVerdicts mal = check_malesevic(f, iv, cfg);
    v.malesevic_t1 = mal.t1;
    v.malesevic_m1 = mal.m1;
    try {
        v.has_flett_point = find_flett_points(f, iv, cfg).found();
    } catch (const DomainError&) {
        v.has_flett_point = false;
    }
    return v;
}

} // namespace mvtlab
