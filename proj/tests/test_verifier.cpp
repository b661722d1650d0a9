#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/verifier.hpp"

#include <doctest.h>

#include <algorithm>
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

TEST_CASE("verification on exact kernels")
{
    const auto h3 = hyperbolic3_kernel();
    const EstimateContext ctx{3, 2.0, 5.0};

    const auto lyd = make_family(ctx, Family::LYD, {0.5});
    GridSpec grid;
    grid.r = log_grid(1e-2, 8.0, 30);
    grid.r.insert(grid.r.begin(), 0.0);
    grid.t = log_grid(0.05, 5.0, 30);
    const auto rep = verify_bound(lyd, h3, grid);
    CHECK(rep.passed());
    CHECK(rep.max_G <= 0.0);
    CHECK(rep.margin_curve.size() == grid.t.size());
    CHECK(rep.samples.size() == grid.r.size() * grid.t.size());

    const auto improved = verify_bound(make_family(ctx, Family::ImprovedLYD, {0.5}), h3);
    CHECK(improved.passed());
    CHECK(improved.grid.t.front() > 0.5);
    CHECK(improved.grid.t.back() == doctest::Approx(5.0));
    CHECK(improved.grid.r.size() == 41);
    CHECK(improved.grid.t.size() == 60);

    const auto euclid = euclidean_gaussian(3);
    const auto lin = verify_bound(make_family({3, 0.0, 10.0}, Family::LiXuLinear), euclid);
    CHECK(lin.passed());
    for (double m : lin.center_margin) {
        CHECK(std::abs(m) <= 1e-9);
    }
}

TEST_CASE("a too-small bound is caught")
{
    // psi halved: LYD(1/2) with n/(4 beta t) breaks the inequality near r = 0.
    const auto h3 = hyperbolic3_kernel();
    const auto hamilton_flat = make_family({3, 2.0, 5.0}, Family::Cor18Case2, {0.5, 0.2});
    GridSpec grid{{0.0, 0.1}, log_grid(hamilton_flat.t_min() * 1.01, 5.0, 10)};
    const auto rep = verify_bound(hamilton_flat, h3, grid);
    // Case 2 is only proven for large t; on H^3 it holds there as well.
    CHECK(rep.passed());

    const auto fake = make_generated_bound(
        {3, 2.0, 5.0},
        GeneratedProfile{constant_function(0.5),
                         make_time_function([](double t) { return 0.5 / t; }), "fake", {}});
    const auto bad = verify_bound(fake, h3);
    CHECK_FALSE(bad.passed());
    CHECK(bad.max_G > 0.0);
    CHECK(std::all_of(bad.violations.begin(), bad.violations.end(),
                      [](const GridPoint& p) { return p.G > 1e-9; }));
}

TEST_CASE("verification preconditions")
{
    const auto h3 = hyperbolic3_kernel();
    CHECK(code_of([&] { verify_bound(make_family({3, 1.0, 5.0}, Family::LYD, {0.5}), h3); })
          == ErrorCode::HypothesisMismatch);
    CHECK(code_of([&] { verify_bound(make_family({2, 2.0, 5.0}, Family::LYD, {0.5}), h3); })
          == ErrorCode::HypothesisMismatch);
    GridSpec outside{{0.0, 9.0}, {1.0}};
    CHECK(code_of([&] { verify_bound(make_family({3, 2.0, 5.0}, Family::LYD, {0.5}), h3, outside); })
          == ErrorCode::OutsideWindow);
}

TEST_CASE("sharpness ratios")
{
    const EstimateContext ctx{2, 1.0, 1.0};
    std::vector<double> ts;
    for (int j = 5; j <= 20; ++j) {
        ts.push_back(std::ldexp(1.0, -j));
    }
    const auto lin = sharpness_ratio(make_family(ctx, Family::LiXuLinear), ts);
    CHECK(lin.back() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::is_sorted(lin.begin(), lin.end()));
    const auto lyd = sharpness_ratio(make_family(ctx, Family::LYD, {0.5}), ts);
    CHECK(lyd.back() == doctest::Approx(0.5).epsilon(1e-5));

    CHECK(sharpness_limit(make_family(ctx, Family::Hamilton)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sharpness_limit(make_family(ctx, Family::LYD, {0.3})) == doctest::Approx(0.3).epsilon(1e-9));
    // Qian's theta family has leading constant (2 - theta)^2/(8 theta (1 - theta)).
    CHECK(sharpness_limit(make_family(ctx, Family::QianTheta, {0.5}))
          == doctest::Approx(8.0 / 9.0).epsilon(1e-9));
    CHECK(sharpness_limit(make_family(ctx, Family::QianTheta, {2.0 / 3.0}))
          == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(code_of([&] { sharpness_limit(make_family({2, 1.0, 5.0}, Family::ImprovedLYD, {0.5})); })
          == ErrorCode::OutOfDomain);
}

TEST_CASE("comparison tables")
{
    const EstimateContext ctx{3, 1.0, 4.0};
    const auto lyd = make_family(ctx, Family::LYD, {0.5});
    const auto imp = make_family(ctx, Family::ImprovedLYD, {0.5});
    const auto grid = log_grid(0.5, 4.0, 50);
    const auto table = compare_bounds({lyd, imp}, grid);
    REQUIRE(table.t.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        REQUIRE(table.dominant[j].has_value());
        const double t = grid[j];
        if (t <= 1.0) {
            CHECK_FALSE(table.psi[j][1].has_value());
        }
        if (t > 1.03125 * (1 + 1e-9)) {
            CHECK(*table.dominant[j] == 1);
        } else {
            CHECK(*table.dominant[j] == 0);
        }
    }
    const auto swapped = compare_bounds({imp, lyd}, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(table.ids[*table.dominant[j]] == swapped.ids[*swapped.dominant[j]]);
    }

    const auto single = compare_bounds({lyd}, {1.0, 2.0});
    CHECK(*single.dominant[0] == 0);
    CHECK(*single.psi[1][0] == lyd.evaluate(2.0).psi);

    const EstimateContext c2{2, 1.0, 1000.0};
    const auto far = compare_bounds(
        {make_family(c2, Family::LYD, {0.5}), make_family(c2, Family::LiXuLinear)}, {100.0, 1000.0});
    // Large t: lixu-linear has beta -> 0 and psi -> nk/4, below lyd's nk/(4(1 - beta)) in
    // beta form, while in alpha form lyd's phi stays bounded and lixu-linear's grows.
    CHECK(*far.dominant[0] == 1);
    CHECK(*far.dominant[1] == 1);
    CHECK(*far.dominant_phi[0] == 0);
    CHECK(*far.dominant_phi[1] == 0);

    CHECK(code_of([&] { compare_bounds({imp}, {0.2, 0.5}); }) == ErrorCode::EmptyDomain);
    CHECK(code_of([&] { compare_bounds({}, {1.0}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { compare_bounds({lyd, make_family({2, 1.0, 4.0}, Family::Hamilton)}, {1.0}); })
          == ErrorCode::InvalidParameter);

    // Exact tie: lexicographically smaller id wins.
    const auto tie = compare_bounds({make_family(ctx, Family::LYD, {0.5}),
                                     make_family(ctx, Family::Cor18Case2, {0.5, 1.0})},
                                    {3.9});
    CHECK(tie.ids[*tie.dominant[0]] == "cor18-case2(0.5,1)");
}

TEST_CASE("crossover")
{
    const EstimateContext ctx{3, 1.0, 3.0};
    const auto lyd = make_family(ctx, Family::LYD, {0.5});
    const auto imp = make_family(ctx, Family::ImprovedLYD, {0.5});
    CHECK(std::abs(find_crossover(lyd, imp, 1.001, 3.0) - 1.03125) <= 1e-8);
    CHECK(std::abs(find_crossover(imp, lyd, 1.001, 3.0) - 1.03125) <= 1e-8);
    CHECK(code_of([&] { find_crossover(lyd, lyd, 1.0, 3.0); }) == ErrorCode::NoSignChange);
    const auto case2 = make_family(ctx, Family::Cor18Case2, {0.5, 1.0});
    CHECK(code_of([&] { find_crossover(lyd, case2, 1.5, 3.0); }) == ErrorCode::NoSignChange);
    CHECK(code_of([&] { find_crossover(lyd, imp, 0.5, 3.0); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("large-time limits")
{
    const auto hyp = asymptotic_limits(make_family({2, 1.0, 1.0}, Family::LiXuHyperbolic));
    REQUIRE(hyp.alpha_inf.has_value());
    REQUIRE(hyp.phi_inf.has_value());
    CHECK(*hyp.alpha_inf == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(*hyp.phi_inf == doctest::Approx(2.0).epsilon(1e-9));

    const auto lin = asymptotic_limits(make_family({2, 1.0, 1.0}, Family::LiXuLinear));
    CHECK_FALSE(lin.alpha_inf.has_value());

    const double beta = 0.4;
    const auto lyd = asymptotic_limits(make_family({3, 1.5, 1.0}, Family::LYD, {beta}));
    const double alpha = 1.0 / beta;
    REQUIRE(lyd.alpha_inf.has_value());
    REQUIRE(lyd.phi_inf.has_value());
    CHECK(*lyd.alpha_inf == doctest::Approx(alpha));
    CHECK(*lyd.phi_inf == doctest::Approx(3 * alpha * alpha * 1.5 / (4 * (alpha - 1))).epsilon(1e-9));
}

TEST_CASE("theta0 substitution")
{
    const auto c = improved_equals_qian_at_theta0({3, 1.0, 1.0}, 0.5, 2.0);
    CHECK(c.theta0 == 0.5);
    CHECK(c.qian == doctest::Approx(1.546875).epsilon(1e-14));
    CHECK(c.improved == doctest::Approx(1.546875).epsilon(1e-14));
    CHECK(c.diff <= 1e-12);
    CHECK(code_of([] { improved_equals_qian_at_theta0({3, 1.0, 1.0}, 0.5, 1.0); })
          == ErrorCode::InvalidParameter);
    CHECK(code_of([] { improved_equals_qian_at_theta0({3, 2.0, 1.0}, 1.0 / 3.0, 1.0); })
          == ErrorCode::InvalidParameter);
    CHECK(code_of([] { improved_equals_qian_at_theta0({3, 0.0, 1.0}, 0.5, 2.0); })
          == ErrorCode::KZeroUnsupported);
}

TEST_CASE("case 2 domination")
{
    for (const auto& [beta, gamma] : {std::pair{0.5, 0.1}, std::pair{1.0 / 3.0, 0.05}}) {
        const auto d = cor18_case2_domination({3, 1.0, 1.0}, beta, gamma);
        CHECK(d.holds);
        CHECK(d.t.size() == 100);
        CHECK(d.threshold == doctest::Approx((1 - beta) / (16 * gamma) + (1 - beta) / beta));
    }
}
