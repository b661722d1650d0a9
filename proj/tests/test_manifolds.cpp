#include "gradest/errors.hpp"
#include "gradest/manifolds.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace gradest;

namespace {

double residual_at(const LogHeatData& d, double r, double t)
{
    const std::pair<double, double> p{r, t};
    return heat_residual(d, std::span(&p, 1)).front();
}

}  // namespace

TEST_CASE("euclidean kernel")
{
    for (int n : {1, 2, 3, 5}) {
        const auto d = euclidean_gaussian(n);
        CHECK(std::abs(residual_at(d, 1.0, 1.0)) <= 1e-12);
        for (double r : {0.0, 0.5, 3.0}) {
            for (double t : {0.05, 1.0, 7.0}) {
                CHECK(d.grad_sq(r, t) - d.f_t(r, t) == doctest::Approx(n / (2.0 * t)).epsilon(1e-12));
            }
        }
    }
    CHECK(euclidean_gaussian(3).u(0.0, 1.0)
          == doctest::Approx(std::pow(4 * std::numbers::pi, -1.5)).epsilon(1e-15));
}

TEST_CASE("hyperbolic 3-space kernel")
{
    const auto d = hyperbolic3_kernel();
    CHECK(d.k == 2.0);
    CHECK(std::abs(residual_at(d, 2.0, 0.5)) <= 1e-8);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double r = 0.1 + (8.0 - 0.1) * i / 19.0;
            const double t = 0.05 + (5.0 - 0.05) * j / 19.0;
            const double scale = 1.0 + std::abs(d.f_t(r, t)) + d.grad_sq(r, t);
            CHECK(std::abs(residual_at(d, r, t)) <= 1e-8 * scale);
        }
    }
    CHECK(d.grad_sq(0.0, 1.0) == 0.0);
    for (double t : {0.05, 0.5, 2.0}) {
        CHECK(d.grad_sq(0.0, t) - d.f_t(0.0, t) == doctest::Approx(1.5 / t + 1.0).epsilon(1e-14));
        CHECK(std::abs(residual_at(d, 0.0, t)) <= 1e-12);
    }
    // u = (4 pi t)^{-3/2} r/sinh(r) exp(-t - r^2/(4t))
    const double r = 1.3;
    const double t = 0.7;
    const double want = std::pow(4 * std::numbers::pi * t, -1.5) * r / std::sinh(r)
                        * std::exp(-t - r * r / (4 * t));
    CHECK(d.u(r, t) == doctest::Approx(want).epsilon(1e-14));

    // Laplacian against a finite-difference radial operator on log u.
    auto f = [&](double rr) { return std::log(d.u(rr, t)); };
    const double h = 1e-4;
    const double fr = (f(r + h) - f(r - h)) / (2 * h);
    const double frr = (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
    CHECK(d.laplacian(r, t) == doctest::Approx(frr + 2.0 / std::tanh(r) * fr).epsilon(1e-6));
    CHECK(d.grad_sq(r, t) == doctest::Approx(fr * fr).epsilon(1e-7));

    try {
        residual_at(d, 9.0, 1.0);
        FAIL("outside window");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideWindow);
    }
}

TEST_CASE("seed profile is the exact kernel for n = 3")
{
    const auto d = hyperbolic3_kernel();
    for (double r : {0.0, 0.4, 2.5}) {
        CHECK(hyperbolic_seed_profile(3, r, 0.3) == doctest::Approx(d.u(r, 0.3)).epsilon(1e-14));
    }
}

TEST_CASE("solver config validation")
{
    RadialSolverConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.n_r = 100;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = {};
    cfg.t_start = 3.0;
    CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("radial solver")
{
    RadialSolverConfig cfg;
    cfg.t_end = 1.0;
    const auto sol = radial_heat_solve(cfg);
    const auto exact = hyperbolic3_kernel();
    for (double r : {0.0, 1.0, 3.0, 5.0}) {
        for (double t : {0.5, 0.8}) {
            CHECK(sol->u(r, t) == doctest::Approx(exact.u(r, t)).epsilon(1e-2));
        }
    }
    const auto data = numeric_log_heat_data(sol);
    CHECK(data.kind == DataKind::Numeric);
    CHECK(data.r_max == 6.0);
    CHECK(data.t_lo > cfg.t_start);
    for (double r : {0.5, 2.0, 4.0}) {
        for (double t : {0.4, 0.7}) {
            const double scale = std::abs(data.f_t(r, t)) + data.grad_sq(r, t);
            CHECK(std::abs(residual_at(data, r, t)) <= 1e-3 * std::max(1.0, scale));
            CHECK(data.f_t(r, t) == doctest::Approx(exact.f_t(r, t)).epsilon(1e-2));
        }
    }

    const auto path = std::filesystem::temp_directory_path() / "gradest_solution_test.csv";
    write_radial_solution_csv(*sol, path);
    const auto back = read_radial_solution_csv(path);
    CHECK(back->n() == 3);
    CHECK(back->k() == 2.0);
    REQUIRE(back->t().size() == sol->t().size());
    CHECK(back->t() == sol->t());
    CHECK(back->slice(7) == sol->slice(7));
    CHECK(back->u(1.234, 0.6) == sol->u(1.234, 0.6));
}
