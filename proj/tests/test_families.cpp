#include "gradest/errors.hpp"
#include "gradest/families.hpp"

#include <doctest.h>

#include <cmath>

using namespace gradest;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a gradest::Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("closed-form values")
{
    SUBCASE("lyd")
    {
        const auto b = make_family({2, 1.0, 1.0}, Family::LYD, {0.5});
        CHECK(b.evaluate(1.0).psi == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(b.evaluate(1.0).beta == 0.5);
    }
    SUBCASE("qian theta")
    {
        const auto s = make_family({2, 1.0, 1.0}, Family::QianTheta, {0.5}).evaluate(1.0);
        CHECK(s.alpha == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(s.phi == doctest::Approx(2.375).epsilon(1e-15));
        CHECK(s.psi == doctest::Approx(2.375 / 1.5).epsilon(1e-15));
    }
    SUBCASE("hamilton at k = 0")
    {
        const auto s = make_family({2, 0.0, 1.0}, Family::Hamilton).evaluate(1.0);
        CHECK(s.beta == 1.0);
        CHECK(s.psi == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("improved lyd")
    {
        const auto b = make_family({3, 1.0, 5.0}, Family::ImprovedLYD, {0.5});
        CHECK(b.t_min() == doctest::Approx(1.0));
        CHECK(b.evaluate(2.0).psi == doctest::Approx(1.546875).epsilon(1e-15));
        CHECK(code_of([&] { b.evaluate(1.0); }) == ErrorCode::OutOfDomain);
    }
    SUBCASE("lixu hyperbolic at kt = 20")
    {
        // 30-digit reference values
        const auto s = make_family({2, 1.0, 20.0}, Family::LiXuHyperbolic).evaluate(20.0);
        CHECK(std::abs(s.alpha - 1.99999999999999966862836808726) <= 1e-14);
        CHECK(std::abs(s.phi - 2.00000000000000000849670851058) <= 1e-14);
    }
    SUBCASE("lixu families at k = 0 reduce to n/(2t)")
    {
        for (Family f : {Family::LiXuHyperbolic, Family::LiXuLinear}) {
            const auto s = make_family({3, 0.0, 1.0}, f).evaluate(0.25);
            CHECK(s.beta == 1.0);
            CHECK(s.psi == doctest::Approx(6.0).epsilon(1e-15));
        }
    }
    SUBCASE("lixu hyperbolic small kt is continuous")
    {
        const EstimateContext ctx{2, 1.0, 1.0};
        const auto b = make_family(ctx, Family::LiXuHyperbolic);
        const double t = 1e-6;
        const double x = t;
        // alpha = 1 + 2x/3 + O(x^3), phi = n/(2t) + nk/2 + nk^2 t/6 + O(t^3)
        CHECK(b.evaluate(t).alpha == doctest::Approx(1.0 + 2.0 * x / 3.0).epsilon(1e-14));
        CHECK(b.evaluate(t).phi == doctest::Approx(1.0 / t + 1.0 + t / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("alpha times beta is one for every family")
{
    const EstimateContext ctx{3, 1.0, 50.0};
    std::vector<GradientBound> bounds{
        make_family(ctx, Family::LYD, {0.3}),
        make_family(ctx, Family::Hamilton),
        make_family(ctx, Family::LiXuHyperbolic),
        make_family(ctx, Family::LiXuLinear),
        make_family(ctx, Family::QianTheta, {0.7}),
        make_family(ctx, Family::ImprovedLYD, {0.6}),
        make_family(ctx, Family::Cor18Case1, {0.5, 0.2}),
        make_family(ctx, Family::Cor18Case2, {0.5, 0.1}),
        make_family(ctx, Family::Cor18Case3, {0.5, 0.1, 1.5}),
    };
    for (const auto& b : bounds) {
        for (double t : {1e-3, 0.1, 1.0, 7.5, 40.0}) {
            if (!b.valid_at(t)) {
                continue;
            }
            const auto s = b.evaluate(t);
            CHECK(s.alpha * s.beta == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(s.beta > 0.0);
            CHECK(s.beta < 1.0);
        }
    }
}

TEST_CASE("parameter validation")
{
    const EstimateContext ctx{3, 1.0, 1.0};
    CHECK(code_of([&] { make_family(ctx, Family::LYD, {1.0}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { make_family(ctx, Family::LYD, {}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { make_family(ctx, Family::QianTheta, {0.0}); })
          == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { make_family({3, 0.0, 1.0}, Family::ImprovedLYD, {0.5}); })
          == ErrorCode::KZeroUnsupported);
    CHECK(code_of([&] { make_family(ctx, Family::Cor18Case1, {0.5, 0.01}); })
          == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { make_family(ctx, Family::Cor18Case3, {0.5, 0.1, 2.5}); })
          == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { make_family({3, 1.0, 0.5}, Family::ImprovedLYD, {0.5}); })
          == ErrorCode::EmptyDomain);
    CHECK(code_of([&] { validate(EstimateContext{0, 1.0, 1.0}); }) == ErrorCode::InvalidParameter);
    CHECK_NOTHROW(make_family({3, 0.0, 1.0}, Family::QianTheta, {0.5}));
}

TEST_CASE("validity domain and horizon")
{
    const auto b = make_family({2, 1.0, 2.0}, Family::LYD, {0.5});
    CHECK_FALSE(b.valid_at(0.0));
    CHECK(b.valid_at(2.0));
    CHECK_FALSE(b.valid_at(2.1));
    CHECK(code_of([&] { b.evaluate(3.0); }) == ErrorCode::OutOfDomain);
    const auto wide = b.with_horizon(10.0);
    CHECK(wide.valid_at(3.0));
    CHECK(wide.evaluate(3.0).psi == b.with_horizon(3.0).evaluate(3.0).psi);
    CHECK(b.id() == "lyd(0.5)");
}

TEST_CASE("case 3 threshold balances the two psi")
{
    const double k = 1.0;
    const double beta = 0.5;
    const double gamma = 0.1;
    const double theta = 1.5;
    const double t0 = cor18_case3_threshold(k, beta, gamma, theta);
    const EstimateContext ctx{3, k, 100.0 * t0};
    const auto improved = make_family(ctx, Family::ImprovedLYD, {beta});
    const auto case3 = make_family(ctx, Family::Cor18Case3, {beta, gamma, theta});
    CHECK(case3.t_min() == t0);
    CHECK(improved.evaluate(t0).psi == doctest::Approx(case3.with_horizon(1e9).evaluate(t0 * (1 + 1e-15)).psi).epsilon(1e-9));
    for (double f : {1.01, 2.0, 10.0}) {
        CHECK(improved.evaluate(f * t0).psi < case3.evaluate(f * t0).psi);
    }
    CHECK(improved.evaluate(0.99 * t0).psi > gamma * 3 / std::pow(0.99 * t0, theta) + 3 * k / (4 * (1 - beta)));
}

TEST_CASE("form conversion")
{
    const auto two = constant_function(2.0);
    const auto nk = constant_function(3.0);
    const auto [beta, psi] = convert_form(two, nk);
    CHECK(beta(0.7) == 0.5);
    CHECK(psi(0.7) == 1.5);
    const auto [alpha, phi] = to_alpha_form(beta, psi);
    CHECK(alpha(0.3) == 2.0);
    CHECK(phi(0.3) == 3.0);

    const auto a = make_time_function([](double t) { return 1.0 + 0.5 * t; }, "alpha");
    const auto [b2, p2] = convert_form(a, nk);
    const auto [a2, f2] = to_alpha_form(b2, p2);
    for (double t : {1e-3, 0.5, 4.0}) {
        CHECK(std::abs(a2(t) - a(t)) <= 1e-14 * a(t));
        CHECK(b2(t) == doctest::Approx(1.0 / (1.0 + 0.5 * t)));
    }

    const auto bad = make_time_function([](double t) { return 1.0 - t; }, "bad");
    const std::vector<double> times{0.5};
    CHECK(code_of([&] { convert_form(bad, nk, times); }) == ErrorCode::InvalidParameter);
    const auto [lazy_beta, lazy_psi] = convert_form(bad, nk);
    CHECK(code_of([&] { lazy_beta(0.5); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("family names round-trip")
{
    for (Family f : closed_form_families()) {
        CHECK(parse_family(family_name(f)) == f);
    }
    CHECK_FALSE(parse_family("li-yau").has_value());
}
