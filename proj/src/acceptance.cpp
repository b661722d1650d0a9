#include "gradest/acceptance.hpp"

#include "gradest/coefficients.hpp"
#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/families.hpp"
#include "gradest/manifolds.hpp"
#include "gradest/ode.hpp"
#include "gradest/report_io.hpp"
#include "gradest/reports.hpp"
#include "gradest/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace gradest::acceptance {

namespace {

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string sci(double x)
{
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

std::string fixed(double x, int digits = 8)
{
    std::ostringstream out;
    out.precision(digits);
    out << x;
    return out.str();
}

CriterionResult guarded(int id, std::string title, const std::function<CriterionResult()>& body)
{
    try {
        CriterionResult r = body();
        r.id = id;
        r.title = std::move(title);
        return r;
    } catch (const std::exception& e) {
        return {id, std::move(title), false, std::string("error: ") + e.what()};
    }
}

const std::vector<double>& unit_grid()
{
    static const std::vector<double> grid = log_grid(1e-3, 5.0, 50);
    return grid;
}

struct NamedB {
    std::string name;
    TimeFunction b;
};

std::vector<NamedB> generator_coefficients(double k, double T)
{
    std::vector<NamedB> out;
    for (double theta : {0.3, 0.5, 0.9}) {
        out.push_back({"theta-power(" + fixed(theta, 2) + ")", theta_power_b(theta, k)});
    }
    out.push_back({"lixu-sinh", lixu_sinh_b(k)});
    out.push_back({"qian-from-a(t^2)", qian_to_b(power_a(2.0), k, T)});
    return out;
}

CriterionResult generator_equivalence()
{
    double worst_beta = 0.0;
    double worst_psi = 0.0;
    for (double theta : {0.3, 0.5, 0.9}) {
        for (double k : {0.5, 1.0, 2.0}) {
            for (int n : {2, 3}) {
                const EstimateContext ctx{n, k, 5.0};
                const auto [beta, psi] = generate_from_b(ctx, theta_power_b(theta, k));
                const GradientBound qian = make_family(ctx, Family::QianTheta, {theta});
                for (double t : unit_grid()) {
                    worst_beta = std::max(worst_beta, rel_err(beta(t), 1.0 / (1.0 + theta * k * t)));
                    worst_psi = std::max(worst_psi, rel_err(psi(t), qian.evaluate(t).psi));
                }
            }
        }
    }
    CriterionResult r;
    r.passed = worst_beta <= 1e-8 && worst_psi <= 1e-6;
    r.detail = "max rel err beta " + sci(worst_beta) + " (tol 1e-8), psi " + sci(worst_psi)
               + " (tol 1e-6)";
    return r;
}

CriterionResult lixu_recovery()
{
    double worst_hyp = 0.0;
    double worst_lin = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
        for (int n : {2, 3}) {
            const EstimateContext ctx{n, k, 5.0};
            const auto [beta_h, psi_h] = generate_from_b(ctx, lixu_sinh_b(k));
            const auto [beta_l, psi_l] = generate_from_b(ctx, qian_to_b(power_a(2.0), k, ctx.T));
            const GradientBound hyp = make_family(ctx, Family::LiXuHyperbolic);
            const GradientBound lin = make_family(ctx, Family::LiXuLinear);
            for (double t : unit_grid()) {
                const BoundSample h = hyp.evaluate(t);
                const BoundSample l = lin.evaluate(t);
                worst_hyp = std::max({worst_hyp, rel_err(beta_h(t), h.beta), rel_err(psi_h(t), h.psi)});
                worst_lin = std::max({worst_lin, rel_err(beta_l(t), l.beta), rel_err(psi_l(t), l.psi)});
            }
        }
    }
    CriterionResult r;
    r.passed = worst_hyp <= 1e-6 && worst_lin <= 1e-6;
    r.detail = "max rel err hyperbolic " + sci(worst_hyp) + ", linear " + sci(worst_lin)
               + " (tol 1e-6)";
    return r;
}

CriterionResult b5_and_ode()
{
    double worst_b5 = 0.0;
    std::string worst_id;
    auto check = [&](const EstimateContext& ctx, const GradientBound& bound) {
        const TimeFunction beta = beta_function(bound);
        const TimeFunction psi = psi_function(bound);
        for (double t : unit_grid()) {
            const B5Residual res = b5_residual(ctx, beta, psi, t);
            const double scaled = std::abs(res.residual) / (1.0 + std::abs(res.psi_prime));
            if (scaled > worst_b5) {
                worst_b5 = scaled;
                worst_id = bound.id();
            }
        }
    };
    double worst_ode = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
        for (int n : {2, 3}) {
            const EstimateContext ctx{n, k, 5.0};
            check(ctx, make_family(ctx, Family::LiXuHyperbolic));
            check(ctx, make_family(ctx, Family::LiXuLinear));
            for (double theta : {0.3, 0.5, 0.9}) {
                check(ctx, make_family(ctx, Family::QianTheta, {theta}));
            }
            for (const auto& [name, b] : generator_coefficients(k, ctx.T)) {
                const GradientBound gen = bound_from_b(ctx, b, name);
                check(ctx, gen);
                if (n != 3 || k != 1.0) {
                    continue;
                }
                const TimeFunction beta = beta_function(gen);
                const double t0 = unit_grid().front();
                const TimeFunction ode = ode_psi_solve(ctx, beta, t0, gen.evaluate(t0).psi, ctx.T);
                for (double t : unit_grid()) {
                    worst_ode = std::max(worst_ode, rel_err(ode(t), gen.evaluate(t).psi));
                }
            }
        }
    }
    CriterionResult r;
    r.passed = worst_b5 <= 1e-4 && worst_ode <= 1e-6;
    r.detail = "max |res|/(1+|psi'|) " + sci(worst_b5) + " at " + worst_id
               + " (tol 1e-4); ODE vs quadrature " + sci(worst_ode)
               + " (tol 1e-6); lyd, hamilton, improved-lyd, cor18 are not (B5) solutions";
    return r;
}

CriterionResult condition_suites()
{
    const EstimateContext ctx{3, 1.0, 2.0};
    std::vector<std::string> problems;
    auto expect_pass = [&](Suite suite, SuiteFunctions fns, const std::string& name) {
        const ConditionReport rep = check_suite(suite, fns, ctx);
        if (!rep.passed()) {
            std::string bad;
            for (const auto& v : rep.verdicts) {
                if (v.verdict != Verdict::Pass) {
                    bad += " " + v.id.label + "=" + std::string(to_string(v.verdict));
                }
            }
            problems.push_back(name + ":" + bad);
        }
    };
    expect_pass(Suite::A, {.a = power_a(2.0)}, "A[t^2]");
    expect_pass(Suite::A, {.a = sinh_sq_a(ctx.k)}, "A[sinh^2]");
    expect_pass(Suite::C, {.b = lixu_sinh_b(ctx.k)}, "C[lixu-sinh]");
    expect_pass(Suite::C, {.b = qian_to_b(power_a(2.0), ctx.k, ctx.T)}, "C[qian-from-a]");
    for (double theta : {0.3, 0.5, 0.9}) {
        expect_pass(Suite::C, {.b = theta_power_b(theta, ctx.k)}, "C[theta=" + fixed(theta, 2) + "]");
    }
    const ConditionReport edge = check_suite(Suite::C, {.b = theta_power_b(1.0, ctx.k)}, ctx);
    const ConditionVerdict* c2 = edge.find("C2");
    const bool edge_ok = c2 && c2->verdict == Verdict::Fail && !c2->witnesses.empty();
    if (!edge_ok) {
        problems.push_back("C2 at theta=1 did not fail with a witness");
    }
    CriterionResult r;
    r.passed = problems.empty();
    if (r.passed) {
        r.detail = "A passes for t^2, sinh^2(kt); C passes for 5 coefficients; C2 fails at theta=1 "
                   "(witness t=" + sci(c2->witnesses.front()) + ")";
    } else {
        for (const auto& p : problems) {
            r.detail += (r.detail.empty() ? "" : "; ") + p;
        }
    }
    return r;
}

CriterionResult asymptotics()
{
    double worst_alpha = 0.0;
    double worst_phi = 0.0;
    bool finite = true;
    for (const auto& [n, k] : {std::pair{2, 1.0}, std::pair{3, 2.0}, std::pair{3, 0.5}}) {
        const EstimateContext ctx{n, k, 1.0};
        const AsymptoticLimits lim = asymptotic_limits(make_family(ctx, Family::LiXuHyperbolic));
        if (!lim.alpha_inf || !lim.phi_inf) {
            finite = false;
            continue;
        }
        worst_alpha = std::max(worst_alpha, std::abs(*lim.alpha_inf - 2.0));
        worst_phi = std::max(worst_phi, std::abs(*lim.phi_inf - n * k) / (n * k));
    }
    CriterionResult r;
    r.passed = finite && worst_alpha <= 1e-6 && worst_phi <= 1e-6;
    r.detail = std::string(finite ? "" : "a limit diverged; ") + "|alpha_inf - 2| " + sci(worst_alpha)
               + ", |phi_inf - nk|/nk " + sci(worst_phi) + " (tol 1e-6)";
    return r;
}

CriterionResult sharpness()
{
    const EstimateContext ctx{3, 1.0, 1.0};
    std::vector<std::pair<GradientBound, double>> cases{
        {make_family(ctx, Family::Hamilton), 1.0},
        {make_family(ctx, Family::LiXuHyperbolic), 1.0},
        {make_family(ctx, Family::LiXuLinear), 1.0},
        {make_family(ctx, Family::QianTheta, {0.5}), 1.0},
    };
    for (double beta : {0.3, 0.5, 0.8}) {
        cases.push_back({make_family(ctx, Family::LYD, {beta}), beta});
    }
    std::string misses;
    double worst = 0.0;
    for (const auto& [bound, want] : cases) {
        const double lim = sharpness_limit(bound);
        const double err = std::abs(lim - want);
        worst = std::max(worst, err);
        if (err > 1e-4) {
            misses += " " + bound.id() + "->" + fixed(lim, 10) + " (want " + fixed(want, 4) + ")";
        }
    }
    CriterionResult r;
    r.passed = misses.empty();
    r.detail = "max |limit - target| " + sci(worst) + " (tol 1e-4)";
    if (!r.passed) {
        r.detail += ";" + misses;
    }
    return r;
}

CriterionResult exact_verification()
{
    std::string misses;
    double worst = -1e300;
    const LogHeatData h3 = hyperbolic3_kernel();
    const EstimateContext hctx{3, 2.0, 5.0};
    std::vector<GradientBound> hyperbolic{
        make_family(hctx, Family::LYD, {0.3}),
        make_family(hctx, Family::LYD, {0.5}),
        make_family(hctx, Family::LYD, {0.8}),
        make_family(hctx, Family::Hamilton),
        make_family(hctx, Family::LiXuHyperbolic),
        make_family(hctx, Family::LiXuLinear),
        make_family(hctx, Family::QianTheta, {0.5}),
        make_family(hctx, Family::ImprovedLYD, {0.5}),
    };
    for (const auto& bound : hyperbolic) {
        const VerificationReport rep = verify_bound(bound, h3);
        worst = std::max(worst, rep.max_G);
        if (!rep.passed() || rep.max_G > 1e-9) {
            misses += " h3/" + bound.id() + " max_G=" + sci(rep.max_G);
        }
    }
    const LogHeatData flat = euclidean_gaussian(3);
    const EstimateContext ectx{3, 0.0, 10.0};
    std::vector<GradientBound> euclidean{
        make_family(ectx, Family::LYD, {0.3}),
        make_family(ectx, Family::LYD, {0.5}),
        make_family(ectx, Family::LYD, {0.8}),
        make_family(ectx, Family::Hamilton),
        make_family(ectx, Family::LiXuHyperbolic),
        make_family(ectx, Family::LiXuLinear),
        make_family(ectx, Family::QianTheta, {0.5}),
    };
    double center = 0.0;
    for (const auto& bound : euclidean) {
        const VerificationReport rep = verify_bound(bound, flat);
        worst = std::max(worst, rep.max_G);
        if (!rep.passed() || rep.max_G > 1e-9) {
            misses += " euclid/" + bound.id() + " max_G=" + sci(rep.max_G);
        }
        if (bound.family() == Family::LiXuLinear) {
            for (double m : rep.center_margin) {
                center = std::max(center, std::abs(m));
            }
        }
    }
    if (center > 1e-9) {
        misses += " lixu-linear center margin " + sci(center);
    }
    CriterionResult r;
    r.passed = misses.empty();
    r.detail = "15 bounds, max_G " + sci(worst) + " (tol 1e-9); lixu-linear r=0 margin on R^3 "
               + sci(center);
    if (!r.passed) {
        r.detail += ";" + misses;
    }
    return r;
}

CriterionResult theta0_consistency()
{
    double worst_diff = 0.0;
    for (const auto& [beta0, t0, k] : {std::tuple{0.5, 2.0, 1.0}, std::tuple{1.0 / 3.0, 3.0, 1.0},
                                       std::tuple{0.5, 1.5, 2.0}}) {
        const Theta0Comparison c = improved_equals_qian_at_theta0({3, k, 1.0}, beta0, t0);
        worst_diff = std::max(worst_diff, c.diff);
    }
    const EstimateContext ctx{3, 1.0, 3.0};
    const double t_star = find_crossover(make_family(ctx, Family::LYD, {0.5}),
                                         make_family(ctx, Family::ImprovedLYD, {0.5}), 1.001, 3.0);
    const double cross_err = std::abs(t_star - (1.0 + 1.0 / 32.0));
    bool dominated = true;
    for (const auto& [beta, gamma] : {std::pair{0.5, 0.1}, std::pair{1.0 / 3.0, 0.05}}) {
        dominated = dominated && cor18_case2_domination(ctx, beta, gamma).holds;
    }
    CriterionResult r;
    r.passed = worst_diff <= 1e-12 && cross_err <= 1e-8 && dominated;
    r.detail = "theta0 diff " + sci(worst_diff) + " (tol 1e-12); crossover " + fixed(t_star, 12)
               + " err " + sci(cross_err) + " (tol 1e-8); case-2 domination "
               + (dominated ? "holds" : "violated");
    return r;
}

double solver_error(const RadialSolution& sol, const LogHeatData& exact)
{
    double worst = 0.0;
    for (int j = 0; j <= 15; ++j) {
        const double t = 0.5 + 0.1 * j;
        for (int i = 0; i <= 24; ++i) {
            const double r = 0.25 * i;
            worst = std::max(worst, rel_err(sol.u(r, t), exact.u(r, t)));
        }
    }
    return worst;
}

CriterionResult solver_fidelity()
{
    const LogHeatData exact = hyperbolic3_kernel();
    RadialSolverConfig cfg;
    const auto coarse = radial_heat_solve(cfg);
    RadialSolverConfig fine_cfg = cfg;
    fine_cfg.n_r *= 2;
    fine_cfg.dt_initial /= 2.0;
    fine_cfg.dt_max /= 2.0;
    fine_cfg.dt_growth = std::sqrt(cfg.dt_growth);
    const auto fine = radial_heat_solve(fine_cfg);
    const double e1 = solver_error(*coarse, exact);
    const double e2 = solver_error(*fine, exact);
    const double gain = e1 / e2;

    const EstimateContext ctx{3, 2.0, cfg.t_end};
    const VerificationReport rep =
        verify_bound(make_family(ctx, Family::LYD, {0.5}), numeric_log_heat_data(coarse));
    CriterionResult r;
    r.passed = e1 <= 1e-2 && gain >= 3.0 && rep.passed();
    r.detail = "max rel err " + sci(e1) + " (tol 1e-2), refined " + sci(e2) + ", gain "
               + fixed(gain, 4) + " (need 3); lyd(0.5) on numeric data "
               + (rep.passed() ? "passes" : std::to_string(rep.violations.size()) + " violations")
               + ", max_G " + sci(rep.max_G);
    return r;
}

}  // namespace

CriterionResult run_criterion(int id)
{
    switch (id) {
    case 1: return guarded(1, "generator matches theta family", generator_equivalence);
    case 2: return guarded(2, "Li-Xu bounds recovered from b", lixu_recovery);
    case 3: return guarded(3, "(B5) residual and ODE path", b5_and_ode);
    case 4: return guarded(4, "condition suites A and C", condition_suites);
    case 5: return guarded(5, "large-time limits of Li-Xu", asymptotics);
    case 6: return guarded(6, "sharpness dichotomy", sharpness);
    case 7: return guarded(7, "inequalities on exact kernels", exact_verification);
    case 8: return guarded(8, "theta0 substitution, crossover, domination", theta0_consistency);
    case 9: return guarded(9, "radial solver fidelity", solver_fidelity);
    default: fail(ErrorCode::InvalidParameter, "criteria are numbered 1 to 10");
    }
}

std::vector<CriterionResult> run_criteria()
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 9; ++id) {
        out.push_back(run_criterion(id));
    }
    return out;
}

void write_reports(const std::filesystem::path& dir, const std::vector<CriterionResult>& results)
{
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json summary;
    summary["version"] = 1;
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        items.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    summary["criteria"] = std::move(items);
    summary["passed"] = all;
    write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");

    const EstimateContext hctx{3, 2.0, 5.0};
    const VerificationReport rep =
        verify_bound(make_family(hctx, Family::LYD, {0.5}), hyperbolic3_kernel());
    write_file_atomic(dir / "verify_h3_lyd.json", to_json(rep).dump(2) + "\n");
    write_file_atomic(dir / "verify_h3_lyd.csv", verification_csv(rep));

    const EstimateContext ctx{3, 1.0, 4.0};
    const ComparisonTable table = compare_bounds(
        {make_family(ctx, Family::LYD, {0.5}), make_family(ctx, Family::ImprovedLYD, {0.5})},
        log_grid(1.01, 4.0, 40));
    write_file_atomic(dir / "compare_lyd_improved.csv", comparison_csv(table));

    const auto [beta, psi] = generate_from_b(ctx, theta_power_b(0.5, ctx.k));
    std::vector<BoundSample> samples;
    for (double t : log_grid(1e-3, ctx.T, 40)) {
        const double b = beta(t);
        const double p = psi(t);
        samples.push_back({t, b, p, 1.0 / b, p / b});
    }
    write_file_atomic(dir / "generated_theta_power.csv", samples_csv(samples));
}

CriterionResult determinism(const std::filesystem::path& work_dir)
{
    return guarded(10, "selftest reports are byte-identical", [&] {
        const auto first = work_dir / "run1";
        const auto second = work_dir / "run2";
        std::filesystem::remove_all(first);
        std::filesystem::remove_all(second);
        write_reports(first, run_criteria());
        write_reports(second, run_criteria());
        std::vector<std::string> names;
        for (const auto& entry : std::filesystem::directory_iterator(first)) {
            names.push_back(entry.path().filename().string());
        }
        std::sort(names.begin(), names.end());
        std::string differing;
        for (const auto& name : names) {
            if (!std::filesystem::exists(second / name)
                || read_file(first / name) != read_file(second / name)) {
                differing += " " + name;
            }
        }
        CriterionResult r;
        r.passed = !names.empty() && differing.empty();
        r.detail = std::to_string(names.size()) + " files compared"
                   + (differing.empty() ? "" : "; differ:" + differing);
        return r;
    });
}

std::string format_line(const CriterionResult& result)
{
    return std::string(result.passed ? "PASS" : "FAIL") + "  " + std::to_string(result.id) + "  "
           + result.title + ": " + result.detail;
}

}  // namespace gradest::acceptance
