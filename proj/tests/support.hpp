#pragma once

// Independent oracles and seeded generators shared by the test binaries.
// Nothing here calls the library's scanning, root or quadrature kernels.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Plain bisection to |hi - lo| <= tol. Requires a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Every sign change of f on a uniform grid, bisected.
inline std::vector<double> all_roots(const std::function<double(double)>& f, double lo, double hi,
                                     int n = 20000) {
    std::vector<double> roots;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo + (hi - lo) * i / n;
        const double f1 = f(x1);
        if (f0 * f1 < 0.0) roots.push_back(bisect(f, x0, x1));
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

// Composite 5-point Gauss-Legendre. Never samples the endpoints.
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                             int panels = 2000) {
    static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831,
                                                 -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665,
                                                   0.4786286704993665, 0.2369268850561891,
                                                   0.2369268850561891};
    const double h = (hi - lo) / panels;
    long double sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(mid + 0.5 * h * nodes[k]);
    }
    return static_cast<double>(sum) * 0.5 * h;
}

// Richardson-extrapolated central difference, independent of the library's.
inline double derivative(const std::function<double(double)>& f, double x) {
    const double h = 1e-3 * std::max(1.0, std::fabs(x));
    auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

} // namespace oracle

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin() { return integer(0, 1) == 1; }

    // A nonzero coefficient rounded to 1/8 so that printed forms stay exact.
    double coefficient(double span) {
        double c = 0.0;
        while (c == 0.0) c = std::round(uniform(-span, span) * 8.0) / 8.0;
        return c;
    }

private:
    std::mt19937_64 engine_;
};

inline mvtlab::Expr x() { return mvtlab::Expr::variable(); }

inline mvtlab::Expr polynomial(Rng& rng, int degree) {
    mvtlab::Expr p = mvtlab::Expr::constant(rng.coefficient(3.0));
    for (int k = 1; k <= degree; ++k) {
        const double c = k == degree ? rng.coefficient(3.0) : (rng.coin() ? rng.coefficient(3.0) : 0.0);
        if (c != 0.0) p = p + c * mvtlab::pow(x(), static_cast<double>(k));
    }
    return p;
}

inline mvtlab::Expr trig(Rng& rng) {
    const double w = rng.integer(1, 4) * 0.5;
    const double phase = rng.coefficient(2.0);
    mvtlab::Expr t = rng.coefficient(2.0) * mvtlab::sin(w * x() + phase);
    if (rng.coin()) t = t + rng.coefficient(1.0) * x();
    if (rng.coin()) t = t + rng.coefficient(1.0) * mvtlab::cos(x());
    return t;
}

// Smooth test function: polynomial of degree 2..5, or a trig combination.
inline mvtlab::Expr smooth(Rng& rng) {
    return rng.coin() ? polynomial(rng, rng.integer(2, 5)) : trig(rng);
}

// Random interval [a, a + w] with w in [0.5, 3].
inline mvtlab::Interval interval(Rng& rng) {
    const double a = std::round(rng.uniform(-2.0, 1.0) * 16.0) / 16.0;
    const double w = std::round(rng.uniform(0.5, 3.0) * 16.0) / 16.0;
    return {a, a + w};
}

// Random well-defined expression tree built from the parser's vocabulary.
inline mvtlab::Expr tree(Rng& rng, int depth) {
    using mvtlab::Expr;
    if (depth == 0 || rng.integer(0, 4) == 0) {
        return rng.coin() ? x() : Expr::constant(rng.coefficient(3.0));
    }
    const int op = rng.integer(0, 9);
    // draw subtrees in a fixed order so a seed means the same tree everywhere
    const Expr l = tree(rng, depth - 1);
    const Expr r = op < 4 ? tree(rng, depth - 1) : Expr::constant(0.0);
    switch (op) {
    case 0: return l + r;
    case 1: return l - r;
    case 2: return l * r;
    case 3: return l / (2.0 + mvtlab::sin(r));
    case 4: return mvtlab::pow(l, static_cast<double>(rng.integer(2, 3)));
    case 5: return mvtlab::sin(l);
    case 6: return mvtlab::cos(l);
    case 7: return mvtlab::exp(mvtlab::sin(l));
    case 8: return mvtlab::sqrt(1.0 + mvtlab::pow(l, 2.0));
    default: return -l;
    }
}

} // namespace gen
