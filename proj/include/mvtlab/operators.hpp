#pragma once

#include <memory>
#include <vector>

#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"

namespace mvtlab {

/// t -> integral of g over [lo, t], for t in [lo, hi].
///
/// Panel integrals over the scan grid are computed once and prefix-summed, so
/// each evaluation costs one quadrature over a single partial panel.
class CumulativeIntegral {
public:
    CumulativeIntegral(ScalarFn integrand, double lo, double hi, const SolverConfig& cfg);

    double operator()(double t) const;
    double total() const { return prefix_.back(); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    ScalarFn integrand_;
    double lo_;
    double hi_;
    double quad_tol_;
    std::vector<double> nodes_;
    std::vector<double> prefix_;
};

/// A function of t made of a pointwise part plus a multiple of a cumulative
/// integral: value(t) = pointwise(t) + coefficient * integral_lo^t g.
class OperatorValue {
public:
    OperatorValue(ScalarFn pointwise, double coefficient, ScalarFn integrand, const Interval& domain,
                  const SolverConfig& cfg);

    double operator()(double t) const;
    const CumulativeIntegral& integral() const { return *integral_; }

private:
    ScalarFn pointwise_;
    double coefficient_;
    std::shared_ptr<const CumulativeIntegral> integral_;
};

/// (T phi)(t) = phi(t) - integral_0^t phi
OperatorValue apply_T(const Expr& phi, const SolverConfig& cfg = {});
/// (S psi)(t) = t psi(t) - integral_0^t x psi(x) dx
OperatorValue apply_S(const Expr& psi, const SolverConfig& cfg = {});
/// (V f)(t) = integral_lo^t f, lo = domain.a()
OperatorValue apply_V(const Expr& f, const SolverConfig& cfg = {}, const Interval& domain = {0.0, 1.0});
/// (V_phi psi)(t) = integral_lo^t phi(x) psi(x) dx
OperatorValue apply_V_weighted(const Expr& phi, const Expr& psi, const SolverConfig& cfg = {},
                               const Interval& domain = {0.0, 1.0});

/// Three identities on (0, 1) for continuous f, g:
///   first:  int f * (Tg)(xi) = int g * (Tf)(xi)
///   second: (Tf)(xi) = (Sf)(xi)
///   third:  int f * (Sg)(xi) = int g * (Sf)(xi)
/// Each identity is searched and reported separately. Throws NoRootFound when
/// one of them has neither a root nor degeneracy.
struct LupuTriple {
    TheoremResult first;
    TheoremResult second;
    TheoremResult third;
};
LupuTriple lupu_4_6_points(const Expr& f, const Expr& g, const SolverConfig& cfg = {});

/// Same as the first and third identities above with the constants replaced
/// by the (1 - x)-weighted integrals.
struct LupuPair {
    TheoremResult first;
    TheoremResult second;
};
LupuPair lupu_4_7_points(const Expr& f, const Expr& g, const SolverConfig& cfg = {});

/// Roots of (f(x) - f(a)) g'(x) - f'(x) (g(x) - g(a)). Throws DomainError when
/// g' vanishes on the grid. Hypothesis flag: f'(a)/g'(a) = f'(b)/g'(b).
TheoremResult cauchy_flett_points(const Expr& f, const Expr& g, const Interval& iv,
                                  const SolverConfig& cfg = {});

/// Roots of R(t) = int_a^t f g - g(a) int_a^t f. Requires int_a^b f = 0
/// (HypothesisError otherwise) and g' != 0 on the grid (DomainError).
TheoremResult thm_4_9_points(const Expr& f, const Expr& g, const Interval& iv,
                             const SolverConfig& cfg = {});

/// Roots on (0, 1) of
///   V_phi f(xi) int g - V_phi g(xi) int f - phi(0) (V f(xi) int g - V g(xi) int f).
/// Throws DomainError when phi' vanishes on the grid.
TheoremResult thm_4_10_points(const Expr& f, const Expr& g, const Expr& phi,
                              const SolverConfig& cfg = {});

/// A point of equal norm ratios: ||f||_{phi,(0,xi)} / ||g||_{phi,(0,xi)} = ||f|| / ||g||.
struct WeightedNormPoint {
    PointResult point;
    double weighted_norm_f = 0.0;  // (int_0^xi f^2 phi)^(1/2)
    double weighted_norm_g = 0.0;
    double norm_f = 0.0;           // L2(0,1)
    double norm_g = 0.0;
};

/// All sign changes of N(xi) = int_0^xi f^2 phi * int g^2 - int_0^xi g^2 phi * int f^2.
TheoremResult weighted_norm_points(const Expr& f, const Expr& g, const Expr& phi,
                                   const SolverConfig& cfg = {});

/// The root of N nearest the middle of (0, 1), with the four norms. Throws
/// NoRootFound when N has no sign change and is not identically zero.
WeightedNormPoint weighted_norm_point(const Expr& f, const Expr& g, const Expr& phi,
                                      const SolverConfig& cfg = {});

} // namespace mvtlab
