#include "mvtlab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace mvtlab {

Interval::Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("interval endpoints must be finite");
    }
    if (!(a < b)) throw std::invalid_argument("interval requires a < b");
}

void SolverConfig::validate() const {
    if (scan_points < 2) throw std::invalid_argument("scan_points must be at least 2");
    if (!(root_tol > 0) || !(residual_tol > 0) || !(quad_tol > 0) || !(endpoint_margin > 0) ||
        !(singular_threshold > 0)) {
        throw std::invalid_argument("solver tolerances must be strictly positive");
    }
    if (!(endpoint_margin < 0.5)) throw std::invalid_argument("endpoint_margin must be below 0.5");
}

namespace {

constexpr std::array<std::pair<std::string_view, TheoremId>, 26> kTheoremNames{{
    {"rolle", TheoremId::rolle},
    {"lagrange", TheoremId::lagrange},
    {"cauchy", TheoremId::cauchy},
    {"integral-mvt", TheoremId::integral_mvt},
    {"flett", TheoremId::flett},
    {"meyers-2.3", TheoremId::meyers_2_3},
    {"meyers-2.4", TheoremId::meyers_2_4},
    {"meyers-2.5", TheoremId::meyers_2_5},
    {"meyers-2.6", TheoremId::meyers_2_6},
    {"meyers-2.7", TheoremId::meyers_2_7},
    {"meyers-2.8", TheoremId::meyers_2_8},
    {"meyers-2.9", TheoremId::meyers_2_9},
    {"riedel-sahoo", TheoremId::riedel_sahoo},
    {"cakmak-tiryaki", TheoremId::cakmak_tiryaki},
    {"second-order-a", TheoremId::second_order_a},
    {"second-order-b", TheoremId::second_order_b},
    {"pawlikowska", TheoremId::pawlikowska},
    {"cauchy-flett", TheoremId::cauchy_flett},
    {"thm-4.9", TheoremId::volterra_null_mean},
    {"thm-4.10", TheoremId::volterra_weighted},
    {"weighted-norm", TheoremId::weighted_norm},
    {"lupu-4.6-t", TheoremId::lupu_t_pair},
    {"lupu-4.6-ts", TheoremId::lupu_t_equals_s},
    {"lupu-4.6-s", TheoremId::lupu_s_pair},
    {"lupu-4.7-t", TheoremId::lupu_weighted_t},
    {"lupu-4.7-s", TheoremId::lupu_weighted_s},
}};

int sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

struct Panel {
    double a, m, b;
    double fa, fm, fb;
    double flm, frm;
    double coarse;   // Simpson on [a, b]
    double left;     // Simpson on [a, m]
    double right;    // Simpson on [m, b]
    double err;
    int depth;

    double estimate() const { return left + right + (left + right - coarse) / 15.0; }
    bool operator<(const Panel& o) const { return err < o.err; }
};

double simpson(double h, double fa, double fm, double fb) { return h / 6.0 * (fa + 4.0 * fm + fb); }

class PanelBuilder {
public:
    explicit PanelBuilder(const ScalarFn& f) : f_(f) {}

    double sample(double x) const {
        const double v = f_(x);
        if (!std::isfinite(v)) {
            throw QuadratureError("integrand is not finite at x = " + std::to_string(x));
        }
        return v;
    }

    Panel make(double a, double b, double fa, double fm, double fb, int depth) const {
        Panel p{};
        p.a = a;
        p.b = b;
        p.m = 0.5 * (a + b);
        p.fa = fa;
        p.fm = fm;
        p.fb = fb;
        p.flm = sample(0.5 * (a + p.m));
        p.frm = sample(0.5 * (p.m + b));
        const double h = b - a;
        p.coarse = simpson(h, fa, fm, fb);
        p.left = simpson(0.5 * h, fa, p.flm, fm);
        p.right = simpson(0.5 * h, fm, p.frm, fb);
        // Uncorrected difference: the /15 Richardson factor under-reports on
        // panels that straddle a jump.
        p.err = std::fabs(p.left + p.right - p.coarse);
        p.depth = depth;
        return p;
    }

private:
    const ScalarFn& f_;
};

constexpr int kMaxDepth = 60;
constexpr int kInitialPanels = 8;
constexpr double kSignNoise = 64.0 * std::numeric_limits<double>::epsilon();
constexpr int kEndpointRefinement = 8;
constexpr std::size_t kMaxPanels = 2'000'000;

} // namespace

std::string_view to_string(TheoremId id) {
    for (const auto& [name, tid] : kTheoremNames) {
        if (tid == id) return name;
    }
    return "unknown";
}

std::optional<TheoremId> theorem_from_string(std::string_view name) {
    if (name == "lupu-4.6") return TheoremId::lupu_t_pair;
    if (name == "lupu-4.7") return TheoremId::lupu_weighted_t;
    for (const auto& [n, tid] : kTheoremNames) {
        if (n == name) return tid;
    }
    return std::nullopt;
}

Residual as_residual(ScalarFn f) {
    return [f = std::move(f)](double x) {
        const double v = f(x);
        return ResidualSample{v, std::fabs(v)};
    };
}

ScanResult bracket_scan(const Residual& f, const Interval& iv, const SolverConfig& cfg,
                        Endpoints endpoints) {
    cfg.validate();
    const double margin = endpoints == Endpoints::open ? cfg.endpoint_margin * iv.width() : 0.0;
    const double lo = iv.a() + margin;
    const double hi = iv.b() - margin;
    const auto m = static_cast<std::size_t>(cfg.scan_points);
    const double h = (hi - lo) / static_cast<double>(m - 1);

    // Uniform grid, plus a geometric run into the first and last cells: a
    // residual with a double zero at the endpoint hides nearby sign changes.
    std::vector<double> xs;
    xs.reserve(m + 2 * kEndpointRefinement);
    xs.push_back(lo);
    for (int k = kEndpointRefinement; k >= 1; --k) xs.push_back(lo + std::ldexp(h, -k));
    for (std::size_t i = 1; i + 1 < m; ++i) xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1));
    for (int k = 1; k <= kEndpointRefinement; ++k) xs.push_back(hi - std::ldexp(h, -k));
    xs.push_back(hi);
    const std::size_t n = xs.size();

    ScanResult out;
    out.grid.resize(n);
    out.values.resize(n);
    std::vector<double> magnitudes(n, 0.0);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const ResidualSample s = f(x);
        out.grid[i] = x;
        out.values[i] = s.value;
        magnitudes[i] = std::isfinite(s.magnitude) ? s.magnitude : 0.0;
        if (std::isfinite(s.value)) {
            ++out.finite_count;
            if (std::isfinite(s.magnitude)) scale = std::max(scale, s.magnitude);
            scale = std::max(scale, std::fabs(s.value));
        }
    }
    if (out.finite_count < 2) {
        throw DomainError("residual is finite at fewer than two scan points");
    }
    out.residual_scale = scale;

    const double zero_band = cfg.residual_tol * scale;
    std::size_t small = 0;
    std::optional<std::size_t> last_signed;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = out.values[i];
        if (!std::isfinite(v)) {
            last_signed.reset();
            continue;
        }
        if (std::fabs(v) <= zero_band) ++small;
        // below the rounding noise of its own terms the sign means nothing
        const int s = std::fabs(v) <= kSignNoise * magnitudes[i] ? 0 : sign(v);
        if (s == 0) continue;
        if (last_signed && sign(out.values[*last_signed]) == -s) {
            out.brackets.push_back({out.grid[*last_signed], out.grid[i]});
        }
        last_signed = i;
    }
    out.identically_zero =
        static_cast<double>(small) >= 0.99 * static_cast<double>(out.finite_count);
    return out;
}

ScanResult bracket_scan(const ScalarFn& f, const Interval& iv, const SolverConfig& cfg,
                        Endpoints endpoints) {
    return bracket_scan(as_residual(f), iv, cfg, endpoints);
}

double refine_root(const ScalarFn& f, double lo, double hi, const SolverConfig& cfg) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(std::isfinite(fa) && std::isfinite(fb)) || sign(fa) == sign(fb)) {
        throw DomainError("refine_root needs a finite sign-change bracket");
    }
    if (std::fabs(fa) < std::fabs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa;
    double d = b - a;
    bool bisected = true;
    constexpr int kMaxIter = 400;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if (fb == 0.0 || std::fabs(b - a) <= cfg.root_tol) break;
        double s;
        if (fa != fc && fb != fc) {
            // inverse quadratic interpolation
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        const double lo_s = std::min((3.0 * a + b) / 4.0, b);
        const double hi_s = std::max((3.0 * a + b) / 4.0, b);
        const bool reject = !(s > lo_s && s < hi_s) ||
                            (bisected && std::fabs(s - b) >= std::fabs(b - c) / 2.0) ||
                            (!bisected && std::fabs(s - b) >= std::fabs(c - d) / 2.0) ||
                            (bisected && std::fabs(b - c) < cfg.root_tol) ||
                            (!bisected && std::fabs(c - d) < cfg.root_tol) || !std::isfinite(s);
        if (reject) {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        double fs = f(s);
        if (!std::isfinite(fs)) {
            // Treat a non-finite probe like a bisection step towards the finite side.
            s = 0.5 * (a + b);
            fs = f(s);
            bisected = true;
            if (!std::isfinite(fs)) break;
        }
        d = c;
        c = b;
        fc = fb;
        if (sign(fa) * sign(fs) < 0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::fabs(fa) < std::fabs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }
    return std::clamp(b, std::min(lo, hi), std::max(lo, hi));
}

double integrate(const ScalarFn& f, double lo, double hi, double tol) {
    if (lo == hi) return 0.0;
    if (lo > hi) return -integrate(f, hi, lo, tol);

    const double width = hi - lo;
    auto endpoint_value = [&](double x, double inward) {
        double v = f(x);
        // one-sided interior sample for an integrable endpoint singularity
        for (double step = 1e-12; !std::isfinite(v) && step < 1e-3; step *= 10.0) {
            v = f(x + inward * step * width);
        }
        if (!std::isfinite(v)) throw QuadratureError("integrand is not finite near an endpoint");
        return v;
    };

    const PanelBuilder builder(f);
    std::priority_queue<Panel> queue;
    long double total = 0.0L;
    long double total_err = 0.0L;

    double fa = endpoint_value(lo, 1.0);
    const double f_hi = endpoint_value(hi, -1.0);
    for (int k = 0; k < kInitialPanels; ++k) {
        const double a = lo + width * k / kInitialPanels;
        const double b = k + 1 == kInitialPanels ? hi : lo + width * (k + 1) / kInitialPanels;
        const double fb = k + 1 == kInitialPanels ? f_hi : builder.sample(b);
        const Panel p = builder.make(a, b, fa, builder.sample(0.5 * (a + b)), fb, 0);
        total += p.estimate();
        total_err += p.err;
        queue.push(p);
        fa = fb;
    }

    while (total_err > tol * (1.0L + std::fabs(total))) {
        const Panel worst = queue.top();
        if (worst.depth >= kMaxDepth || queue.size() >= kMaxPanels) {
            throw QuadratureError("adaptive Simpson did not reach tolerance within depth 60");
        }
        queue.pop();
        const Panel left = builder.make(worst.a, worst.m, worst.fa, worst.flm, worst.fm, worst.depth + 1);
        const Panel right = builder.make(worst.m, worst.b, worst.fm, worst.frm, worst.fb, worst.depth + 1);
        total += left.estimate() + right.estimate() - worst.estimate();
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        if (queue.size() % 4096 == 0) {
            // resum to keep the running totals from drifting
            total = 0.0L;
            total_err = 0.0L;
            auto copy = queue;
            while (!copy.empty()) {
                total += copy.top().estimate();
                total_err += copy.top().err;
                copy.pop();
            }
        }
    }
    // Final sum in a fixed order (left to right) so the result does not depend
    // on heap layout.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    long double sum = 0.0L;
    for (const auto& p : panels) sum += p.estimate();
    return static_cast<double>(sum);
}

double integrate(const ScalarFn& f, double lo, double hi, const SolverConfig& cfg) {
    return integrate(f, lo, hi, cfg.quad_tol);
}

double central_diff(const ScalarFn& f, double x, int order) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (order != 1 && order != 2) throw std::invalid_argument("central_diff supports order 1 or 2");
    const double base = order == 1 ? std::cbrt(eps) : std::sqrt(std::sqrt(eps));
    volatile double probe = x + base * std::max(1.0, std::fabs(x));
    const double h = probe - x;
    const double fp = f(x + h);
    const double fm = f(x - h);
    if (order == 1) {
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw DomainError("central difference stencil is not finite");
        }
        return (fp - fm) / (2.0 * h);
    }
    const double f0 = f(x);
    if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(f0)) {
        throw DomainError("central difference stencil is not finite");
    }
    return (fp - 2.0 * f0 + fm) / (h * h);
}

bool nearly_equal(double u, double v, double tol) {
    return std::fabs(u - v) <= tol * std::max({1.0, std::fabs(u), std::fabs(v)});
}

TheoremResult locate_points(TheoremId id, const Residual& residual, const Interval& iv,
                            const SolverConfig& cfg, const SearchOptions& options) {
    const ScanResult scan = bracket_scan(residual, iv, cfg, options.endpoints);
    const double zero_band = cfg.residual_tol * scan.residual_scale;

    TheoremResult out;
    out.theorem = id;
    out.residual_scale = scan.residual_scale;

    auto representative = [&](double x) {
        out.degenerate = true;
        out.points.push_back(PointResult{x, residual(x).value, id, true});
        return out;
    };

    if (scan.identically_zero) return representative(iv.midpoint());

    // A residual that vanishes on one smooth piece only (|x| left of its kink,
    // sgn) still has infinitely many points.
    if (!options.breakpoints.empty()) {
        std::vector<double> cuts{scan.grid.front()};
        for (double bp : options.breakpoints) {
            if (bp > scan.grid.front() && bp < scan.grid.back()) cuts.push_back(bp);
        }
        cuts.push_back(scan.grid.back());
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            std::size_t finite = 0, small = 0;
            for (std::size_t i = 0; i < scan.grid.size(); ++i) {
                const double x = scan.grid[i];
                if (x <= cuts[k] || x >= cuts[k + 1]) continue;
                if (!std::isfinite(scan.values[i])) continue;
                ++finite;
                if (std::fabs(scan.values[i]) <= zero_band) ++small;
            }
            if (finite >= 16 && static_cast<double>(small) >= 0.99 * static_cast<double>(finite)) {
                return representative(0.5 * (cuts[k] + cuts[k + 1]));
            }
        }
    }

    const ScalarFn value = [&](double x) { return residual(x).value; };
    for (const Bracket& br : scan.brackets) {
        const double xi = refine_root(value, br.lo, br.hi, cfg);
        const double r = value(xi);
        // A sign change across a jump is not a root.
        if (!std::isfinite(r) || std::fabs(r) > zero_band) continue;
        if (!out.points.empty() && std::fabs(xi - out.points.back().xi) <= 10.0 * cfg.root_tol) {
            continue;
        }
        out.points.push_back(PointResult{xi, r, id, false});
    }

    if (out.points.empty()) {
        std::size_t best = 0;
        double best_abs = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < scan.values.size(); ++i) {
            const double v = std::fabs(scan.values[i]);
            if (std::isfinite(v) && v < best_abs) {
                best_abs = v;
                best = i;
            }
        }
        out.closest = PointResult{scan.grid[best], scan.values[best], id, false};
    }
    return out;
}

} // namespace mvtlab
