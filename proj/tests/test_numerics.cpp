#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mvtlab/errors.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/numerics.hpp"
#include "support.hpp"

using namespace mvtlab;

namespace {

ScalarFn fn(const char* src) { return ScalarFn(parse(src)); }

} // namespace

TEST_CASE("interval_rejects_bad_bounds") {
    CHECK_THROWS_AS(Interval(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Interval(0, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(Interval(std::nan(""), 1), std::invalid_argument);
    const Interval iv(-1, 3);
    CHECK(iv.width() == 4);
    CHECK(iv.midpoint() == 1);
    CHECK(iv.reflect(0) == 2);
    CHECK(iv.contains_open(0));
    CHECK_FALSE(iv.contains_open(-1));
}

TEST_CASE("config_validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.scan_points = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.root_tol = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.endpoint_margin = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.quad_tol = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("theorem_names_round_trip") {
    for (int i = 0; i <= static_cast<int>(TheoremId::lupu_weighted_s); ++i) {
        const auto id = static_cast<TheoremId>(i);
        CAPTURE(to_string(id));
        CHECK(theorem_from_string(to_string(id)) == id);
    }
    CHECK(theorem_from_string("integral-mvt") == TheoremId::integral_mvt);
    CHECK(theorem_from_string("meyers-2.3") == TheoremId::meyers_2_3);
    CHECK(theorem_from_string("thm-4.9") == TheoremId::volterra_null_mean);
    CHECK(theorem_from_string("lupu-4.6") == TheoremId::lupu_t_pair);
    CHECK(theorem_from_string("lupu-4.7") == TheoremId::lupu_weighted_t);
    CHECK_FALSE(theorem_from_string("flet").has_value());
}

TEST_CASE("bracket_scan_finds_sign_changes") {
    const ScanResult s = bracket_scan(fn("sin(3*x)"), Interval(0.1, 3.0), SolverConfig{});
    REQUIRE(s.brackets.size() == 2);
    CHECK(s.brackets[0].lo < oracle::kPi / 3);
    CHECK(s.brackets[0].hi > oracle::kPi / 3);
    CHECK(s.brackets[1].lo < 2 * oracle::kPi / 3);
    CHECK(s.brackets[1].hi > 2 * oracle::kPi / 3);
    CHECK_FALSE(s.identically_zero);
    CHECK(s.finite_count == 4096 + 16);
    CHECK(s.grid.front() > 0.1);
    CHECK(s.grid.back() < 3.0);
    CHECK(std::is_sorted(s.grid.begin(), s.grid.end()));
}

TEST_CASE("bracket_scan_resolves_roots_inside_the_end_cells") {
    // (x - 0)^2 (x - 1e-4): the root sits inside the first uniform cell
    const ScanResult s = bracket_scan(fn("x^2*(x-0.0001)"), Interval(0.0, 1.0), SolverConfig{});
    REQUIRE(s.brackets.size() == 1);
    CHECK(s.brackets[0].lo < 1e-4);
    CHECK(s.brackets[0].hi > 1e-4);
}

TEST_CASE("bracket_scan_closed_grid_hits_endpoints") {
    const ScanResult s = bracket_scan(fn("x"), Interval(-1, 2), SolverConfig{}, Endpoints::closed);
    CHECK(s.grid.front() == -1);
    CHECK(s.grid.back() == 2);
}

TEST_CASE("bracket_scan_bridges_exact_zeros") {
    SolverConfig cfg;
    cfg.scan_points = 5;  // grid -1, -0.5, 0, 0.5, 1
    const ScanResult s = bracket_scan(fn("x"), Interval(-1, 1), cfg, Endpoints::closed);
    REQUIRE(s.brackets.size() == 1);
    CHECK(s.brackets[0].lo == -0.5);
    CHECK(s.brackets[0].hi == 0.5);
}

TEST_CASE("bracket_scan_resets_at_non_finite_values") {
    // the pole of 1/x falls between grid points, so it still shows as a bracket
    const ScanResult s = bracket_scan(fn("1/x"), Interval(-1, 1), SolverConfig{}, Endpoints::closed);
    CHECK(s.brackets.size() == 1);
    const ScanResult t = bracket_scan(fn("sqrt(x)*sgn(x-0.5)"), Interval(-1, 1), SolverConfig{});
    REQUIRE(t.brackets.size() == 1);
    CHECK(t.brackets[0].lo > 0.0);
    CHECK(t.finite_count < 4096);
}

TEST_CASE("bracket_scan_needs_two_finite_values") {
    CHECK_THROWS_AS(bracket_scan(fn("sqrt(-1-x^2)"), Interval(0, 1), SolverConfig{}), DomainError);
}

TEST_CASE("bracket_scan_detects_identically_zero") {
    const ScanResult s = bracket_scan(fn("sin(x)^2+cos(x)^2-1"), Interval(0, 5), SolverConfig{});
    CHECK(s.identically_zero);
    const ScanResult t = bracket_scan(fn("x^2-1"), Interval(0, 5), SolverConfig{});
    CHECK_FALSE(t.identically_zero);
}

TEST_CASE("bracket_scan_ignores_sign_below_rounding_noise") {
    // value 1e-18 with constituent terms of size 1: no reliable sign
    const Residual r = [](double x) {
        return ResidualSample{x < 0.5 ? 1e-18 : -1.0, 1.0};
    };
    const ScanResult s = bracket_scan(r, Interval(0, 1), SolverConfig{});
    CHECK(s.brackets.empty());
}

TEST_CASE("refine_root_matches_bisection") {
    struct Case {
        const char* f;
        double lo, hi;
    };
    const Case cases[] = {{"x^3-2", 1, 2}, {"cos(x)-x", 0, 1}, {"exp(x)-3", 0, 2}, {"x^5+x-1", 0, 1},
                          {"atan(x-0.3)", -5, 5}};
    for (const Case& c : cases) {
        CAPTURE(c.f);
        const double x = refine_root(fn(c.f), c.lo, c.hi, SolverConfig{});
        CHECK(x == doctest::Approx(oracle::bisect(fn(c.f), c.lo, c.hi)).epsilon(1e-11));
    }
}

TEST_CASE("refine_root_requires_a_bracket") {
    CHECK_THROWS_AS(refine_root(fn("x^2+1"), -1, 1, SolverConfig{}), DomainError);
    CHECK(refine_root(fn("x-1"), 1, 2, SolverConfig{}) == 1);
}

TEST_CASE("refine_root_stays_in_bracket_on_a_jump") {
    const double x = refine_root(fn("sgn(x-0.3)"), 0, 1, SolverConfig{});
    CHECK(x >= 0);
    CHECK(x <= 1);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("integrate_against_gauss_legendre") {
    struct Case {
        const char* f;
        double lo, hi;
    };
    const Case cases[] = {{"x^4-3*x", -1, 2}, {"sin(x)*exp(x)", 0, 3}, {"1/(1+25*x^2)", -1, 1},
                          {"sqrt(x)", 0, 4}, {"abs(x-0.3)", -1, 1}, {"cos(20*x)", 0, 1}};
    const SolverConfig cfg;
    for (const Case& c : cases) {
        CAPTURE(c.f);
        const double got = integrate(fn(c.f), c.lo, c.hi, cfg);
        const double want = oracle::gauss_legendre(fn(c.f), c.lo, c.hi, 20000);
        CHECK(std::fabs(got - want) <= 10 * cfg.quad_tol * (1 + std::fabs(want)));
    }
}

TEST_CASE("integrate_arcsin_by_symmetry") {
    CHECK(std::fabs(integrate(fn("asin(x)"), -1, 1, SolverConfig{})) <= 1e-9);
    // closed form: pi/2 - 1
    CHECK(integrate(fn("asin(x)"), 0, 1, SolverConfig{}) == doctest::Approx(oracle::kPi / 2 - 1).epsilon(1e-9));
}

TEST_CASE("integrate_reversed_and_empty") {
    const SolverConfig cfg;
    CHECK(integrate(fn("exp(x)"), 1, 0, cfg) == doctest::Approx(-(std::exp(1.0) - 1)).epsilon(1e-12));
    CHECK(integrate(fn("exp(x)"), 1, 1, cfg) == 0);
}

TEST_CASE("integrate_jump_meets_tolerance") {
    const SolverConfig cfg;
    CHECK(std::fabs(integrate(fn("sgn(x)"), -1, 2, cfg) - 1.0) <= cfg.quad_tol * 2);
}

TEST_CASE("integrate_endpoint_singularity") {
    CHECK(integrate(fn("ln(x)"), 0, 1, SolverConfig{}) == doctest::Approx(-1).epsilon(1e-9));
}

TEST_CASE("integrate_reports_failure") {
    CHECK_THROWS_AS(integrate(fn("1/x"), 0, 1, SolverConfig{}), QuadratureError);
    CHECK_THROWS_AS(integrate(fn("1/x"), -1, 1, SolverConfig{}), QuadratureError);
}

TEST_CASE("integrate_is_additive") {
    gen::Rng rng(404);
    const SolverConfig cfg;
    for (int i = 0; i < 100; ++i) {
        const Expr p = gen::polynomial(rng, rng.integer(1, 6));
        const double a = rng.uniform(-2, 0), b = rng.uniform(0, 1), c = rng.uniform(1, 2);
        const double ab = integrate(ScalarFn(p), a, b, cfg);
        const double bc = integrate(ScalarFn(p), b, c, cfg);
        const double ac = integrate(ScalarFn(p), a, c, cfg);
        CHECK(std::fabs(ab + bc - ac) <= 10 * cfg.quad_tol * std::max({1.0, std::fabs(ab), std::fabs(bc)}));
    }
}

TEST_CASE("central_diff_orders") {
    CHECK(central_diff(fn("sin(x)"), 0.4) == doctest::Approx(std::cos(0.4)).epsilon(1e-9));
    CHECK(central_diff(fn("sin(x)"), 0.4, 2) == doctest::Approx(-std::sin(0.4)).epsilon(1e-6));
    CHECK(central_diff(fn("x^3"), 100) == doctest::Approx(3e4).epsilon(1e-9));
    CHECK_THROWS_AS(central_diff(fn("x"), 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(central_diff(fn("sqrt(x)"), 0), DomainError);
}

TEST_CASE("nearly_equal_is_relative_above_one") {
    CHECK(nearly_equal(1e6, 1e6 + 1e-4, 1e-9));
    CHECK_FALSE(nearly_equal(1e6, 1e6 + 1, 1e-9));
    CHECK(nearly_equal(0, 1e-10, 1e-9));
    CHECK_FALSE(nearly_equal(0, 1e-8, 1e-9));
}

TEST_CASE("locate_points_degenerate_returns_midpoint") {
    const TheoremResult r =
        locate_points(TheoremId::rolle, as_residual(fn("0*x")), Interval(0, 2), SolverConfig{});
    CHECK(r.degenerate);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].xi == 1);
    CHECK(r.points[0].degenerate);
    CHECK(r.found());
}

TEST_CASE("locate_points_degenerate_piece") {
    // zero on (-1, 0), nonzero on (0, 1)
    SearchOptions opts;
    opts.breakpoints = {0.0};
    const TheoremResult r = locate_points(TheoremId::flett, as_residual(fn("x*(sgn(x)+1)")), Interval(-1, 1),
                                          SolverConfig{}, opts);
    CHECK(r.degenerate);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].xi < 0);
}

TEST_CASE("locate_points_drops_jumps_and_reports_closest") {
    const TheoremResult r =
        locate_points(TheoremId::rolle, as_residual(fn("(x-0.5)/abs(x-0.5)")), Interval(0, 1), SolverConfig{});
    CHECK(r.points.empty());
    CHECK_FALSE(r.found());
    REQUIRE(r.closest.has_value());
    const TheoremResult q =
        locate_points(TheoremId::rolle, as_residual(fn("x^2+1")), Interval(-1, 1), SolverConfig{});
    REQUIRE(q.closest.has_value());
    CHECK(q.closest->xi == doctest::Approx(0).scale(1).epsilon(1e-3));
}

TEST_CASE("locate_points_all_roots") {
    const TheoremResult r = locate_points(TheoremId::rolle, as_residual(fn("cos(x)")), Interval(0, 10), SolverConfig{});
    const auto want = oracle::all_roots(fn("cos(x)"), 0, 10);
    REQUIRE(r.points.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(r.points[i].xi == doctest::Approx(want[i]).epsilon(1e-11));
}
