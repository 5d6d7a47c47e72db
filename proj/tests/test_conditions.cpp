#include <doctest.h>

#include <cmath>
#include <string>
#include <utility>

#include "mvtlab/conditions.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/flett.hpp"
#include "support.hpp"

using namespace mvtlab;
using V = Verdict;

TEST_CASE("verdict_strings") {
    for (V v : {V::satisfied, V::not_satisfied, V::boundary, V::not_applicable}) {
        CHECK(verdict_from_string(to_string(v)) == v);
    }
    CHECK(to_string(V::not_applicable) == "NotApplicable");
    CHECK_FALSE(verdict_from_string("satisfied").has_value());
}

TEST_CASE("cube_on_minus_two_thirds") {
    const Expr f = parse("x^3");
    const Interval iv(-2.0 / 3, 1);
    // s = 7/9, f'(a) = 4/3, f'(b) = 3
    CHECK(*trahan_product(f, iv) == doctest::Approx((3 - 7.0 / 9) * (4.0 / 3 - 7.0 / 9)));
    const ConditionVector c = classify(f, iv);
    CHECK(c.flett == V::not_satisfied);
    CHECK(c.trahan == V::satisfied);
    CHECK_FALSE(c.trahan_boundary);
    CHECK(c.tong == V::not_satisfied);
    CHECK(c.malesevic_t1 == V::satisfied);      // phi1'(b) phi1(b) = (4/3)(-5/9)
    CHECK(c.malesevic_m1 == V::not_satisfied);  // phi1'(a) phi1(b) = (-2)(-5/9)
    CHECK(c.has_flett_point);
    CHECK(*c.m_of_f == doctest::Approx(19.0 / 54).epsilon(1e-12));
    CHECK(*c.i_of_f == doctest::Approx(13.0 / 108).epsilon(1e-10));
}

TEST_CASE("cube_on_minus_half_is_trahan_boundary") {
    const Expr f = parse("x^3");
    const Interval iv(-0.5, 1);
    const ConditionVector c = classify(f, iv);
    CHECK(c.flett == V::not_satisfied);
    CHECK(c.trahan == V::satisfied);
    CHECK(c.trahan_boundary);
    // phi1(b) = s - f'(a) = 0, so both Malesevic products vanish
    CHECK(c.malesevic_t1 == V::boundary);
    CHECK(c.malesevic_m1 == V::boundary);
    CHECK(c.has_flett_point);
}

TEST_CASE("cube_on_symmetric_interval") {
    const ConditionVector c = classify(parse("x^3"), Interval(-1, 1));
    CHECK(c.flett == V::satisfied);
    CHECK(c.trahan == V::satisfied);
    CHECK(c.tong == V::satisfied);
    CHECK(c.malesevic_t1 == V::satisfied);
    CHECK(c.malesevic_m1 == V::not_satisfied);
    CHECK(c.has_flett_point);
}

TEST_CASE("sine_over_one_and_a_half_periods") {
    const ConditionVector c = classify(parse("sin(x)"), Interval(-oracle::kPi / 2, 2.5 * oracle::kPi));
    CHECK(c.flett == V::satisfied);
    CHECK(c.trahan == V::satisfied);
    CHECK(c.tong == V::satisfied);
    CHECK(c.malesevic_t1 == V::satisfied);
    CHECK(c.malesevic_m1 == V::not_satisfied);
    CHECK(c.has_flett_point);
}

TEST_CASE("arcsin_satisfies_tong_only") {
    const Expr f = parse("asin(x)");
    const Interval iv(-1, 1);
    const ConditionVector c = classify(f, iv);
    CHECK(c.flett == V::not_applicable);
    CHECK(c.trahan == V::not_applicable);
    CHECK(c.tong == V::satisfied);
    CHECK(c.malesevic_t1 == V::not_applicable);
    CHECK(c.malesevic_m1 == V::not_applicable);
    CHECK(c.has_flett_point);
    CHECK(std::fabs(*c.m_of_f - *c.i_of_f) <= 1e-8);
    CHECK_FALSE(trahan_product(f, iv).has_value());
}

TEST_CASE("sign_function_has_points_but_no_condition") {
    const ConditionVector c = classify(parse("sgn(x)"), Interval(-1, 1));
    CHECK(c.flett == V::not_applicable);
    CHECK(c.trahan == V::not_applicable);
    CHECK(c.tong == V::not_applicable);
    CHECK(c.malesevic_t1 == V::not_applicable);
    CHECK(c.malesevic_m1 == V::not_applicable);
    CHECK(c.has_flett_point);
}

TEST_CASE("kink_makes_tong_not_applicable") {
    // M = 1, I = 1/2, but f is not differentiable at 0
    const ConditionVector c = classify(parse("abs(x)"), Interval(-1, 1));
    CHECK(c.tong == V::not_applicable);
    CHECK(*c.m_of_f == doctest::Approx(1));
    CHECK(*c.i_of_f == doctest::Approx(0.5));
    CHECK(c.has_flett_point);
}

TEST_CASE("both_malesevic_conditions") {
    // f = x q(x), q = x (x - 1/2)(x - 2): phi1 = q on [0, 3/2]
    const Expr f = parse("x^4-2.5*x^3+x^2");
    const Interval iv(0, 1.5);
    const auto m = check_malesevic(f, iv);
    CHECK(m.t1 == V::satisfied);
    CHECK(m.m1 == V::satisfied);
    const auto r = find_flett_points(f, iv);
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[0].xi == doctest::Approx((5 - std::sqrt(13.0)) / 6).epsilon(1e-10));
    CHECK(r.points[1].xi == doctest::Approx((5 + std::sqrt(13.0)) / 6).epsilon(1e-10));
}

TEST_CASE("phi1_and_its_derivative") {
    const Expr f = parse("x^3");
    const ScalarFn p = phi1(f, -1);
    CHECK(p(-1) == 0);
    // (x^3 + 1)/(x + 1) - 3 = x^2 - x - 2
    CHECK(p(0.5) == doctest::Approx(0.25 - 0.5 - 2));
    const ScalarFn dp = phi1_prime(f, -1);
    CHECK(dp(0.5) == doctest::Approx(2 * 0.5 - 1));
    CHECK(dp(0.3) == doctest::Approx(oracle::derivative(p, 0.3)).epsilon(1e-8));
    CHECK(*phi1_prime_at_a(f, -1) == doctest::Approx(-3));
    CHECK_FALSE(phi1_prime_at_a(parse("asin(x)"), -1).has_value());
}

TEST_CASE("tong_means_against_oracle") {
    const Expr f = parse("exp(x)*cos(x)");
    const Interval iv(-0.5, 2);
    const Means m = tong_means(f, iv);
    CHECK(m.arithmetic == doctest::Approx((f(-0.5) + f(2)) / 2));
    CHECK(m.integral == doctest::Approx(oracle::gauss_legendre(ScalarFn(f), -0.5, 2) / 2.5).epsilon(1e-10));
    CHECK(check_tong(f, iv) == V::not_satisfied);
}

TEST_CASE("flett_condition_checker") {
    CHECK(check_flett_condition(parse("x^3-x"), Interval(-1, 1)) == V::satisfied);
    CHECK(check_flett_condition(parse("x^3"), Interval(0, 1)) == V::not_satisfied);
    CHECK(check_flett_condition(parse("abs(x)"), Interval(-1, 1)) == V::not_applicable);
}

TEST_CASE("trahan_checker") {
    // x^2: f'(a) - s and f'(b) - s have opposite signs on any interval
    CHECK(check_trahan(parse("x^2"), Interval(0, 1)) == V::not_satisfied);
    CHECK(check_trahan(parse("x^3"), Interval(-1, 1)) == V::satisfied);
}

TEST_CASE("trahan_zero_at_b_is_boundary") {
    // f'(b) equals the secant slope; the only Flett point is b itself
    const Expr f = parse("0.375-2.25*x+1.625*x^3");
    const Interval iv(-1.5, 0.75);
    CHECK(*trahan_product(f, iv) == doctest::Approx(0.0).scale(1));
    const ConditionVector c = classify(f, iv);
    CHECK(c.trahan == V::boundary);
    CHECK(c.trahan_boundary);
    CHECK_FALSE(c.has_flett_point);
}

TEST_CASE("tong_auxiliary_vanishes_at_b") {
    for (const char* src : {"x^3", "sin(x)", "asin(x)"}) {
        const Expr f = parse(src);
        const Interval iv = std::string(src) == "sin(x)" ? Interval(-oracle::kPi / 2, 2.5 * oracle::kPi)
                                                         : Interval(-1, 1);
        CAPTURE(src);
        REQUIRE(check_tong(f, iv) == V::satisfied);
        // h(b) = (f(b) + f(a)) / 2 (b - a) - integral of f
        const double hb = 0.5 * (f(iv.b()) + f(iv.a())) * iv.width() -
                          oracle::gauss_legendre(ScalarFn(f), iv.a(), iv.b(), 20000);
        CHECK(std::fabs(hb) <= 1e-8);
    }
}

TEST_CASE("verdicts_invariant_under_affine_range_maps") {
    gen::Rng rng(4242);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        const Expr f = gen::smooth(rng);
        const Interval iv = gen::interval(rng);
        const double alpha = rng.coefficient(4.0);
        const double beta = rng.coefficient(4.0);
        const ConditionVector c = classify(f, iv);
        const ConditionVector d = classify(alpha * f + beta, iv);
        CAPTURE(to_string(f));
        CAPTURE(alpha);
        const std::pair<V, V> pairs[] = {{c.flett, d.flett},
                                         {c.trahan, d.trahan},
                                         {c.tong, d.tong},
                                         {c.malesevic_t1, d.malesevic_t1},
                                         {c.malesevic_m1, d.malesevic_m1}};
        for (const auto& [u, w] : pairs) {
            if (u == V::boundary || w == V::boundary || c.trahan_boundary) continue;
            ++compared;
            CHECK(u == w);
        }
        CHECK(c.has_flett_point == d.has_flett_point);
    }
    CHECK(compared > 500);
}

TEST_CASE("classify_reports_quadrature_failure_as_not_applicable") {
    const ConditionVector c = classify(parse("1/x"), Interval(-1, 1));
    CHECK(c.tong == V::not_applicable);
    CHECK(c.flett == V::not_applicable);
}
