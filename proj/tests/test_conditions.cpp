#include "gradest/coefficients.hpp"
#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace gradest;

TEST_CASE("limits at zero")
{
    const auto half = make_time_function([](double t) { return t / 2.0; });
    const auto l0 = limit_at_zero(half, 1.0);
    CHECK(l0.stable);
    CHECK(std::abs(l0.estimate) <= 1e-9);

    const EstimateContext ctx{2, 1.0, 1.0};
    const auto beta = beta_from_b(ctx, theta_power_b(0.5, 1.0));
    const auto l1 = limit_at_zero(beta, 1.0);
    CHECK(l1.stable);
    CHECK(l1.estimate == doctest::Approx(1.0).epsilon(1e-9));

    const auto wobble = make_time_function([](double t) { return std::sin(1.0 / t); });
    CHECK_FALSE(limit_at_zero(wobble, 1.0).stable);

    const auto blowup = make_time_function([](double t) { return 1.0 / t; });
    const auto l2 = limit_at_zero(blowup, 1.0);
    CHECK(l2.divergent);
    CHECK(l2.estimate > 0.0);
}

TEST_CASE("integrability at zero")
{
    const auto root = make_time_function([](double s) { return 1.0 / std::sqrt(s); });
    const auto r1 = integrability_at_zero(root, 1.0);
    CHECK(r1.verdict == Verdict::Pass);
    CHECK(r1.exponent == doctest::Approx(-0.5).epsilon(1e-6));

    const auto inv = make_time_function([](double s) { return 1.0 / s; });
    const auto r2 = integrability_at_zero(inv, 1.0);
    CHECK(r2.verdict == Verdict::Fail);
    CHECK(r2.exponent == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r2.witness > 0.0);

    const double theta = 0.9;
    const auto b = theta_power_b(theta, 1.0);
    const auto ratio = make_time_function([b](double s) {
        const double d = b.derivative.value()(s);
        return d * d / b(s);
    });
    const auto r3 = integrability_at_zero(ratio, 1.0);
    CHECK(r3.verdict == Verdict::Pass);
    CHECK(r3.exponent == doctest::Approx(2.0 / theta - 3.0).epsilon(1e-3));

    const auto negative = make_time_function([](double) { return -1.0; });
    CHECK_THROWS_AS(integrability_at_zero(negative, 1.0), Error);
}

TEST_CASE("suite A")
{
    const EstimateContext ctx{3, 1.0, 2.0};
    const auto report = check_suite(Suite::A, {.a = power_a(2.0)}, ctx);
    CHECK(report.passed());
    CHECK(report.verdicts.size() == 3);
    CHECK(check_suite(Suite::A, {.a = sinh_sq_a(1.0)}, ctx).passed());
    CHECK_THROWS_AS(check_suite(Suite::A, {}, ctx), Error);
}

TEST_CASE("suite C")
{
    const EstimateContext ctx{3, 1.0, 2.0};
    const auto sinh = check_suite(Suite::C, {.b = lixu_sinh_b(1.0)}, ctx, {.delta = 0.5});
    CHECK(sinh.passed());
    REQUIRE(sinh.delta.has_value());
    CHECK(*sinh.delta == 0.5);

    for (double theta : {0.3, 0.5, 0.9}) {
        CHECK(check_suite(Suite::C, {.b = theta_power_b(theta, 1.0)}, ctx).passed());
    }

    const auto edge = check_suite(Suite::C, {.b = theta_power_b(1.0, 1.0)}, ctx);
    CHECK(edge.any_failed());
    const auto* c2 = edge.find("C2");
    REQUIRE(c2 != nullptr);
    CHECK(c2->verdict == Verdict::Fail);
    REQUIRE_FALSE(c2->witnesses.empty());
    CHECK(c2->witnesses.front() < 1e-3);

    CHECK_THROWS_AS(check_suite(Suite::C, {.b = lixu_sinh_b(0.0)}, {3, 0.0, 2.0}), Error);
}

TEST_CASE("suites B and B' on a generated pair")
{
    const EstimateContext ctx{3, 1.0, 2.0};
    const auto b = theta_power_b(0.5, 1.0);
    const auto [beta, psi] = generate_from_b(ctx, b);
    const SuiteFunctions fns{.lambda = b, .beta = beta, .psi = psi};
    const auto rb = check_suite(Suite::B, fns, ctx);
    CHECK(rb.verdicts.size() == suite_labels(Suite::B).size());
    const auto* b5 = rb.find("B5");
    REQUIRE(b5 != nullptr);
    CHECK(b5->verdict == Verdict::Pass);
    const auto rbp = check_suite(Suite::Bprime, fns, ctx);
    CHECK(rbp.verdicts.size() == suite_labels(Suite::Bprime).size());
    CHECK(rbp.find("B5") != nullptr);
}

TEST_CASE("condition ids")
{
    CHECK(make_condition_id(Suite::C, "C3").label == "C3");
    CHECK_THROWS_AS(make_condition_id(Suite::A, "B1"), Error);
    CHECK(parse_suite("Bprime") == Suite::Bprime);
    CHECK_FALSE(parse_suite("D").has_value());
}

TEST_CASE("log grid")
{
    const auto g = log_grid(1e-3, 10.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 10.0);
    CHECK(g[2] == doctest::Approx(0.1));
}
