#include "gradest/acceptance.hpp"
#include "gradest/coefficients.hpp"
#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/families.hpp"
#include "gradest/manifolds.hpp"
#include "gradest/report_io.hpp"
#include "gradest/reports.hpp"
#include "gradest/scenario.hpp"
#include "gradest/verifier.hpp"

#include <cmath>
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace gradest;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_verification = 2;
constexpr int exit_condition = 3;

struct Flags {
    std::optional<std::string> config;
    std::optional<int> n;
    std::optional<double> k;
    std::optional<double> T;
    std::vector<std::string> families;
    std::optional<double> beta;
    std::optional<double> theta;
    std::optional<double> gamma;
    std::optional<std::string> preset;
    std::optional<std::string> a_fn;
    std::optional<std::string> table;
    std::optional<std::string> data;
    std::optional<std::string> solution;
    std::optional<std::string> suite;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<int> points;
    std::vector<double> bracket;
    std::optional<std::string> spec_a;
    std::optional<std::string> spec_b;
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::optional<std::string> out;
    std::optional<std::string> csv;
    RadialSolverConfig solver;
};

void add_context(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "Scenario JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--n", f.n, "Dimension");
    cmd->add_option("--k", f.k, "Ricci lower bound constant (Ric >= -k)");
    cmd->add_option("--T", f.T, "Time horizon");
}

void add_family(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--family", f.families, "Family, e.g. lyd or lyd:0.5 (repeatable)");
    cmd->add_option("--beta", f.beta, "beta for lyd, improved-lyd, cor18-*");
    cmd->add_option("--theta", f.theta, "theta for qian-theta, cor18-case3, theta-power");
    cmd->add_option("--gamma", f.gamma, "gamma for cor18-*");
}

void add_coefficient(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--preset", f.preset, "theta-power | lixu-sinh | qian-from-a");
    cmd->add_option("--a", f.a_fn, "a(t) for qian-from-a: power:p or sinh2");
    cmd->add_option("--table", f.table, "CSV with columns t, b, bprime")->check(CLI::ExistingFile);
}

void add_grid(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--t-min", f.t_min, "Smallest time");
    cmd->add_option("--t-max", f.t_max, "Largest time");
    cmd->add_option("--points", f.points, "Number of log-spaced times");
}

void add_output(CLI::App* cmd, Flags& f, const std::string& what)
{
    cmd->add_option("--out", f.out, what + " (default: stdout)");
}

FamilySpec family_from_flag(const std::string& text, const Flags& f)
{
    FamilySpec spec = parse_family_spec(text);
    if (!spec.params.empty()) {
        return spec;
    }
    for (const auto& name : family_parameter_names(spec.family)) {
        const std::optional<double>& value =
            name == "beta" ? f.beta : name == "gamma" ? f.gamma : f.theta;
        if (!value) {
            fail(ErrorCode::Parse, std::string(family_name(spec.family)) + " needs --" + name);
        }
        spec.params.push_back(*value);
    }
    return spec;
}

Scenario resolve(const Flags& f)
{
    Scenario s = f.config ? load_scenario(*f.config) : Scenario{};
    if (f.n) s.n = *f.n;
    if (f.k) s.k = *f.k;
    if (f.T) s.T = *f.T;
    if (!f.families.empty()) {
        s.bounds.clear();
        for (const auto& text : f.families) {
            s.bounds.push_back(family_from_flag(text, f));
        }
    }
    if (f.preset || f.table) {
        CoefficientSpec c = s.coefficient.value_or(CoefficientSpec{});
        c.preset = f.preset.value_or("table");
        if (f.table) c.table = *f.table;
        s.coefficient = c;
    }
    if (s.coefficient) {
        if (f.theta) s.coefficient->theta = *f.theta;
        if (f.a_fn) s.coefficient->a = *f.a_fn;
    }
    if (f.data) s.data.kind = *f.data;
    if (f.solution) {
        s.data.kind = "radial";
        s.data.solution = *f.solution;
    }
    if (f.suite) {
        s.suite = parse_suite(*f.suite);
        if (!s.suite) {
            fail(ErrorCode::Parse, "unknown suite '" + *f.suite + "'");
        }
    }
    if (f.t_min) s.grid.t_min = *f.t_min;
    if (f.t_max) s.grid.t_max = *f.t_max;
    if (f.points) s.grid.points = *f.points;
    if (f.bracket.size() == 2) s.bracket = std::pair{f.bracket[0], f.bracket[1]};
    if (f.abs_tol) s.tolerance.absolute = *f.abs_tol;
    if (f.rel_tol) s.tolerance.relative = *f.rel_tol;
    if (f.out) s.report = *f.out;
    if (f.csv) s.csv = *f.csv;
    if (s.grid.points < 2) {
        fail(ErrorCode::Parse, "--points must be at least 2");
    }
    return s;
}

void emit(const std::optional<std::filesystem::path>& path, const std::string& content)
{
    if (path) {
        write_file_atomic(*path, content);
    } else {
        std::cout << content;
    }
}

std::vector<double> time_grid(const Scenario& s, double lo_default, double hi_default)
{
    const double lo = s.grid.t_min.value_or(lo_default);
    const double hi = s.grid.t_max.value_or(hi_default);
    if (!(lo > 0.0 && lo < hi)) {
        fail(ErrorCode::Parse, "time grid needs 0 < t-min < t-max");
    }
    return log_grid(lo, hi, s.grid.points);
}

int cmd_families()
{
    for (Family family : closed_form_families()) {
        std::string params;
        for (const auto& name : family_parameter_names(family)) {
            params += (params.empty() ? "" : ",") + name;
        }
        std::cout << family_name(family) << (params.empty() ? "" : "  [" + params + "]") << "\n";
    }
    std::cout << "coefficient presets: theta-power [theta], lixu-sinh, qian-from-a [a]\n";
    return exit_ok;
}

int cmd_eval(const Flags& f)
{
    const Scenario s = resolve(f);
    if (s.bounds.size() != 1 && !s.coefficient) {
        fail(ErrorCode::Parse, "eval needs exactly one --family or a coefficient preset");
    }
    const EstimateContext ctx = s.context(1.0);
    const GradientBound bound = s.bounds.size() == 1
                                    ? build_bound(ctx, s.bounds.front())
                                    : bound_from_b(ctx, build_b(*s.coefficient, ctx.k, ctx.T),
                                                   coefficient_label(*s.coefficient));
    std::vector<BoundSample> samples;
    const double lo = std::max(1e-3 * ctx.T, bound.t_min() * (1.0 + 1e-3));
    for (double t : time_grid(s, lo, ctx.T)) {
        samples.push_back(bound.evaluate(t));
    }
    emit(s.report, samples_csv(samples));
    return exit_ok;
}

int cmd_generate(const Flags& f)
{
    const Scenario s = resolve(f);
    if (!s.coefficient) {
        fail(ErrorCode::Parse, "generate needs --preset or --table");
    }
    const EstimateContext ctx = s.context(1.0);
    const TimeFunction b = build_b(*s.coefficient, ctx.k, ctx.T);
    const GradientBound bound = bound_from_b(ctx, b, coefficient_label(*s.coefficient));
    std::string out = "t,b,beta,psi,alpha,phi\n";
    for (double t : time_grid(s, 1e-3 * ctx.T, ctx.T)) {
        const BoundSample x = bound.evaluate(t);
        out += format_double(t) + "," + format_double(b(t)) + "," + format_double(x.beta) + ","
               + format_double(x.psi) + "," + format_double(x.alpha) + "," + format_double(x.phi)
               + "\n";
    }
    emit(s.report, out);
    return exit_ok;
}

int cmd_check(const Flags& f)
{
    const Scenario s = resolve(f);
    if (!s.suite) {
        fail(ErrorCode::Parse, "check needs --suite A|B|Bprime|C");
    }
    const EstimateContext ctx = s.context(1.0);
    SuiteFunctions fns;
    if (*s.suite == Suite::A) {
        if (!s.coefficient || s.coefficient->preset != "qian-from-a") {
            fail(ErrorCode::Parse, "suite A reads a(t): use --preset qian-from-a --a ...");
        }
        fns.a = build_a(*s.coefficient, ctx.k);
    } else if (*s.suite == Suite::C) {
        if (!s.coefficient) {
            fail(ErrorCode::Parse, "suite C reads b(t): use --preset or --table");
        }
        fns.b = build_b(*s.coefficient, ctx.k, ctx.T);
    } else {
        // lambda = sqrt(b); closed forms with a known b reuse it.
        std::optional<CoefficientSpec> coef = s.coefficient;
        if (!coef && s.bounds.size() == 1) {
            const FamilySpec& spec = s.bounds.front();
            if (spec.family == Family::QianTheta) {
                coef = CoefficientSpec{"theta-power", spec.params.front(), "power:2", {}};
            } else if (spec.family == Family::LiXuHyperbolic) {
                coef = CoefficientSpec{"lixu-sinh", std::nullopt, "power:2", {}};
            } else if (spec.family == Family::LiXuLinear) {
                coef = CoefficientSpec{"qian-from-a", std::nullopt, "power:2", {}};
            }
        }
        if (!coef) {
            fail(ErrorCode::Parse, "suites B and Bprime need a coefficient preset, or one of "
                                   "qian-theta, lixu-hyperbolic, lixu-linear");
        }
        const TimeFunction b = build_b(*coef, ctx.k, ctx.T);
        if (b.has_derivative()) {
            const auto db = *b.derivative;
            fns.lambda = make_time_function([b](double t) { return std::sqrt(b(t)); },
                                            [b, db](double t) { return 0.5 * db(t) / std::sqrt(b(t)); },
                                            "sqrt(b)");
        } else {
            fns.lambda = make_time_function([b](double t) { return std::sqrt(b(t)); }, "sqrt(b)");
        }
        if (b.power_hint) {
            fns.lambda->power_hint = 0.5 * *b.power_hint;
        }
        fns.lambda->zero_limit_hint = 0.0;
        if (!s.coefficient) {
            const GradientBound bound = build_bound(ctx, s.bounds.front());
            fns.beta = beta_function(bound);
            fns.psi = psi_function(bound);
        } else {
            auto [beta, psi] = generate_from_b(ctx, b);
            fns.beta = beta;
            fns.psi = psi;
        }
    }
    const ConditionReport report = check_suite(*s.suite, fns, ctx);
    emit(s.report, to_json(report).dump(2) + "\n");
    return report.any_failed() ? exit_condition : exit_ok;
}

int cmd_verify(const Flags& f)
{
    const Scenario s = resolve(f);
    if (s.bounds.size() != 1) {
        fail(ErrorCode::Parse, "verify needs exactly one --family");
    }
    const LogHeatData data = build_data(s);
    const GradientBound bound = build_bound(s.context(data.t_hi), s.bounds.front());
    GridSpec grid = default_grid(bound, data);
    if (s.grid.t_min || s.grid.t_max || f.points) {
        grid.t = time_grid(s, grid.t.front(), grid.t.back());
    }
    const VerificationReport report = verify_bound(bound, data, grid, s.tolerance);
    emit(s.report, to_json(report).dump(2) + "\n");
    if (s.csv) {
        write_file_atomic(*s.csv, verification_csv(report));
    }
    return report.passed() ? exit_ok : exit_verification;
}

int cmd_compare(const Flags& f)
{
    const Scenario s = resolve(f);
    if (s.bounds.empty()) {
        fail(ErrorCode::Parse, "compare needs at least one --family");
    }
    const EstimateContext ctx = s.context(1.0);
    std::vector<GradientBound> bounds;
    double lo = 1e-3 * ctx.T;
    for (const auto& spec : s.bounds) {
        bounds.push_back(build_bound(ctx, spec));
        lo = std::max(lo, bounds.back().t_min() * (1.0 + 1e-3));
    }
    emit(s.report, comparison_csv(compare_bounds(bounds, time_grid(s, lo, ctx.T))));
    return exit_ok;
}

int cmd_crossover(const Flags& f)
{
    Scenario s = resolve(f);
    if (!f.spec_a || !f.spec_b) {
        fail(ErrorCode::Parse, "crossover needs --a and --b family specs");
    }
    if (!s.bracket) {
        fail(ErrorCode::Parse, "crossover needs --bracket LO HI");
    }
    const EstimateContext ctx = s.context(s.bracket->second);
    const double t = find_crossover(build_bound(ctx, family_from_flag(*f.spec_a, f)),
                                    build_bound(ctx, family_from_flag(*f.spec_b, f)),
                                    s.bracket->first, s.bracket->second);
    emit(s.report, format_double(t) + "\n");
    return exit_ok;
}

int cmd_solve(const Flags& f)
{
    const Scenario s = resolve(f);
    if (!s.report) {
        fail(ErrorCode::Parse, "solve needs --out for the solution CSV");
    }
    RadialSolverConfig cfg = f.config ? s.data.solver : f.solver;
    cfg.n = s.n;
    const auto solution = radial_heat_solve(cfg);
    write_radial_solution_csv(*solution, *s.report);
    std::cout << "wrote " << solution->t().size() << " time slices of " << solution->r().size()
              << " radii to " << s.report->string() << "\n";
    return exit_ok;
}

int cmd_selftest(const Flags& f)
{
    bool all = true;
    std::vector<acceptance::CriterionResult> results;
    for (int id = 1; id <= 9; ++id) {
        results.push_back(acceptance::run_criterion(id));
        std::cout << acceptance::format_line(results.back()) << std::endl;
        all = all && results.back().passed;
    }
    if (f.out) {
        acceptance::write_reports(*f.out, results);
        std::cout << "reports written to " << *f.out << "\n";
    }
    return all ? exit_ok : exit_verification;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Li-Yau type gradient estimates: evaluate, generate, check and verify"};
    app.require_subcommand(1);
    Flags f;

    app.add_subcommand("families", "List built-in bound families");

    auto* eval = app.add_subcommand("eval", "Print beta, psi, alpha, phi on a time grid (CSV)");
    add_context(eval, f);
    add_family(eval, f);
    add_coefficient(eval, f);
    add_grid(eval, f);
    add_output(eval, f, "CSV path");

    auto* generate = app.add_subcommand("generate", "Generate beta and psi from b(t) (CSV)");
    add_context(generate, f);
    add_coefficient(generate, f);
    generate->add_option("--theta", f.theta, "theta for theta-power");
    add_grid(generate, f);
    add_output(generate, f, "CSV path");

    auto* check = app.add_subcommand("check", "Run a condition suite (JSON report)");
    add_context(check, f);
    add_family(check, f);
    add_coefficient(check, f);
    check->add_option("--suite", f.suite, "A | B | Bprime | C");
    add_output(check, f, "JSON report path");

    auto* verify = app.add_subcommand("verify", "Check the inequality on model data (JSON report)");
    add_context(verify, f);
    add_family(verify, f);
    verify->add_option("--data", f.data, "euclid | h3 | radial");
    verify->add_option("--solution", f.solution, "Stored radial solution CSV")
        ->check(CLI::ExistingFile);
    add_grid(verify, f);
    verify->add_option("--abs-tol", f.abs_tol, "Tolerance on G for exact data");
    verify->add_option("--rel-tol", f.rel_tol, "Relative tolerance for numeric data");
    verify->add_option("--csv", f.csv, "Write r, t, G samples here");
    add_output(verify, f, "JSON report path");

    auto* compare = app.add_subcommand("compare", "Tabulate psi of several families (CSV)");
    add_context(compare, f);
    add_family(compare, f);
    add_grid(compare, f);
    add_output(compare, f, "CSV path");

    auto* crossover = app.add_subcommand("crossover", "Time where two families' psi cross");
    add_context(crossover, f);
    crossover->add_option("--a", f.spec_a, "First family spec, e.g. lyd:0.5");
    crossover->add_option("--b", f.spec_b, "Second family spec");
    crossover->add_option("--bracket", f.bracket, "LO HI")->expected(2);
    crossover->add_option("--beta", f.beta, "beta for specs without parameters");
    crossover->add_option("--theta", f.theta, "theta for specs without parameters");
    crossover->add_option("--gamma", f.gamma, "gamma for specs without parameters");
    add_output(crossover, f, "Output path");

    auto* solve = app.add_subcommand("solve", "Radial heat solve on H^n, saved as CSV");
    add_context(solve, f);
    solve->add_option("--r-max", f.solver.r_max, "Outer radius");
    solve->add_option("--nr", f.solver.n_r, "Radial intervals");
    solve->add_option("--t-start", f.solver.t_start, "Seed time");
    solve->add_option("--t-end", f.solver.t_end, "Final time");
    solve->add_option("--dt", f.solver.dt_initial, "Initial time step");
    solve->add_option("--dt-max", f.solver.dt_max, "Largest time step");
    solve->add_option("--dt-growth", f.solver.dt_growth, "Step growth factor");
    add_output(solve, f, "Solution CSV path");

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance criteria");
    selftest->add_option("--out", f.out, "Directory for report files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const auto* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        if (name == "families") return cmd_families();
        if (name == "eval") return cmd_eval(f);
        if (name == "generate") return cmd_generate(f);
        if (name == "check") return cmd_check(f);
        if (name == "verify") return cmd_verify(f);
        if (name == "compare") return cmd_compare(f);
        if (name == "crossover") return cmd_crossover(f);
        if (name == "solve") return cmd_solve(f);
        if (name == "selftest") return cmd_selftest(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConditionFailure ? exit_condition : exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
