#include "gradest/coefficients.hpp"
#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/families.hpp"
#include "gradest/ode.hpp"
#include "gradest/report_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace gradest;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("beta from theta-power b")
{
    const EstimateContext ctx{2, 1.0, 5.0};
    const auto beta = beta_from_b(ctx, theta_power_b(0.5, 1.0));
    for (double t : log_grid(1e-3, 5.0, 30)) {
        CHECK(rel(beta(t), 1.0 / (1.0 + 0.5 * t)) <= 1e-8);
    }
}

TEST_CASE("beta from the sinh coefficient")
{
    const EstimateContext ctx{2, 1.0, 5.0};
    const auto beta = beta_from_b(ctx, lixu_sinh_b(1.0));
    for (double t : log_grid(1e-3, 5.0, 30)) {
        const double s = std::sinh(t);
        const double want = 1.0 / (1.0 + (s * std::cosh(t) - t) / (s * s));
        CHECK(rel(beta(t), want) <= 1e-8);
    }
}

TEST_CASE("leading term of the generated theta family")
{
    for (double theta : {0.5, 2.0 / 3.0, 0.9}) {
        const EstimateContext ctx{3, 1.0, 1.0};
        const auto psi = psi_from_b(ctx, theta_power_b(theta, 1.0));
        const double want = (2 - theta) * (2 - theta) * 3 / (16 * theta * (1 - theta));
        const double t = 1e-7;
        CHECK(t * psi(t) == doctest::Approx(want).epsilon(1e-5));
    }
    // a = t^2 (theta = 2/3) is the sharp member: t psi -> n/2
    const auto psi = psi_from_b({3, 1.0, 1.0}, theta_power_b(2.0 / 3.0, 1.0));
    CHECK(1e-7 * psi(1e-7) == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("qian transform")
{
    const auto b = qian_to_b(power_a(2.0), 1.0, 3.0);
    for (double t : {1e-4, 0.5, 1.0, 3.0, 4.0}) {
        CHECK(rel(b(t), t * t + 2.0 * t * t * t / 3.0) <= 1e-12);
        CHECK(rel(b.derivative.value()(t), 2 * t + 2 * t * t) <= 1e-12);
    }
    const double k = 0.7;
    const auto from_sinh = qian_to_b(sinh_sq_a(k), k, 3.0);
    const auto direct = lixu_sinh_b(k);
    for (double t : {1e-3, 0.2, 1.0, 2.9}) {
        CHECK(rel(from_sinh(t), direct(t)) <= 1e-10);
    }
}

TEST_CASE("log-derivative identity")
{
    const EstimateContext ctx{2, 1.0, 3.0};
    const auto b = theta_power_b(0.5, 1.0);
    CHECK(std::abs(logderiv_identity_residual(ctx, b, beta_from_b(ctx, b), 1.0)) <= 1e-5);
    const auto q = qian_to_b(power_a(2.0), 1.0, 3.0);
    const auto qbeta = beta_from_b(ctx, q);
    for (double t : log_grid(1e-2, 3.0, 20)) {
        CHECK(std::abs(logderiv_identity_residual(ctx, q, qbeta, t)) <= 1e-5);
    }
    CHECK(std::abs(logderiv_identity_residual(ctx, b, constant_function(0.5), 1.0)) > 0.1);
}

TEST_CASE("(B5) residual")
{
    const EstimateContext ctx{2, 1.0, 5.0};
    for (const auto& bound : {make_family(ctx, Family::QianTheta, {0.5}),
                              make_family(ctx, Family::LiXuHyperbolic)}) {
        const auto beta = beta_function(bound);
        const auto psi = psi_function(bound);
        for (double t : log_grid(0.1, 5.0, 30)) {
            const auto r = b5_residual(ctx, beta, psi, t);
            CHECK(std::abs(r.residual) <= 1e-4 * (1 + std::abs(r.psi_prime)));
        }
        // psi + 1 shifts the residual by (2k beta + beta')/(1 - beta)
        const auto shifted = make_time_function([psi](double t) { return psi(t) + 1.0; });
        const double t = 1.3;
        const double base = b5_residual(ctx, beta, psi, t).residual;
        const double moved = b5_residual(ctx, beta, shifted, t).residual;
        const double bp = differentiate(beta, t, ctx.T).value;
        CHECK(moved - base == doctest::Approx((2 * beta(t) + bp) / (1 - beta(t))).epsilon(1e-6));
    }
    // Li-Yau-Davies solves a different equation.
    const auto lyd = make_family(ctx, Family::LYD, {0.5});
    CHECK(std::abs(b5_residual(ctx, beta_function(lyd), psi_function(lyd), 1.0).residual) > 0.1);
    CHECK_THROWS_AS(b5_residual(ctx, constant_function(1.0), constant_function(1.0), 1.0), Error);
}

TEST_CASE("ODE path agrees with quadrature")
{
    const EstimateContext ctx{2, 1.0, 2.0};
    const auto [beta, psi] = generate_from_b(ctx, theta_power_b(0.5, 1.0));
    const auto ode = ode_psi_solve(ctx, beta, 0.05, psi(0.05), 2.0);
    const auto closed = make_family(ctx, Family::QianTheta, {0.5});
    for (double t : log_grid(0.05, 2.0, 25)) {
        CHECK(rel(ode(t), closed.evaluate(t).psi) <= 1e-6);
    }
    // Constant beta: the equilibrium nk/(4(1 - beta)) is a fixed point.
    const double b = 0.4;
    const double eq = 2 * 1.0 / (4 * (1 - b));
    const auto flat = ode_psi_solve(ctx, constant_function(b), 0.1, eq, 2.0);
    CHECK(flat(1.7) == doctest::Approx(eq).epsilon(1e-10));
    CHECK_THROWS_AS(ode_psi_solve(ctx, constant_function(1.2), 0.1, 1.0, 2.0), Error);
}

TEST_CASE("generated bounds match closed forms")
{
    const EstimateContext ctx{3, 1.0, 4.0};
    struct Case {
        TimeFunction b;
        GradientBound closed;
    };
    const std::vector<Case> cases{
        {theta_power_b(0.5, 1.0), make_family(ctx, Family::QianTheta, {0.5})},
        {lixu_sinh_b(1.0), make_family(ctx, Family::LiXuHyperbolic)},
        {qian_to_b(power_a(2.0), 1.0, ctx.T), make_family(ctx, Family::LiXuLinear)},
    };
    for (const auto& c : cases) {
        const auto gen = bound_from_b(ctx, c.b, c.b.label);
        CHECK(gen.family() == Family::GeneratedFromB);
        for (double t : log_grid(1e-3, ctx.T, 25)) {
            CHECK(rel(gen.evaluate(t).psi, c.closed.evaluate(t).psi) <= 1e-6);
            CHECK(rel(gen.evaluate(t).beta, c.closed.evaluate(t).beta) <= 1e-6);
        }
    }
    try {
        bound_from_b(ctx, theta_power_b(1.0, 1.0), "theta-power(1)");
        FAIL("theta = 1 violates (C2)");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConditionFailure);
    }
    CHECK_THROWS_AS(beta_from_b({3, 0.0, 1.0}, theta_power_b(0.5, 0.0)), Error);
}

TEST_CASE("coefficient tables")
{
    const auto b = theta_power_b(0.5, 1.0);
    std::vector<CoefficientRow> rows;
    for (double t : log_grid(1e-3, 3.0, 400)) {
        rows.push_back({t, b(t), b.derivative.value()(t)});
    }
    const auto tb = table_b(rows);
    for (double t : {1e-3, 1e-2, 0.77, 2.5, 3.0}) {
        CHECK(rel(tb(t), b(t)) <= 1e-6);
    }
    // Below the first node b continues as a power law with the node's exponent.
    CHECK(rel(tb(2e-4), b(2e-4)) <= 1e-3);
    CHECK_THROWS_AS(tb(4.0), Error);
    const EstimateContext ctx{3, 1.0, 3.0};
    const auto beta = beta_from_b(ctx, tb);
    CHECK(rel(beta(1.0), 1.0 / 1.5) <= 1e-6);

    const auto dir = std::filesystem::temp_directory_path() / "gradest_table_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "good.csv", "bprime,t,b\n2,1,1\n4,2,4\n6,3,9\n");
    const auto read = read_coefficient_table(dir / "good.csv");
    REQUIRE(read.size() == 3);
    CHECK(read[1].t == 2.0);
    CHECK(read[1].b == 4.0);
    CHECK(read[1].bprime == 4.0);
    write_file_atomic(dir / "bad.csv", "t,b\n1,1\n");
    try {
        read_coefficient_table(dir / "bad.csv");
        FAIL("missing bprime column");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
    }
    write_file_atomic(dir / "unsorted.csv", "t,b,bprime\n2,4,4\n1,1,2\n3,9,6\n");
    CHECK_THROWS_AS(table_b(read_coefficient_table(dir / "unsorted.csv")), Error);
}
