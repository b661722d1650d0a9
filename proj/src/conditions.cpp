#include "gradest/conditions.hpp"

#include "gradest/errors.hpp"
#include "gradest/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace gradest {

namespace {

constexpr std::array<std::string_view, 3> labels_a{"A1", "A2", "A3"};
constexpr std::array<std::string_view, 5> labels_b{"B1", "B2", "B3", "B4", "B5"};
constexpr std::array<std::string_view, 6> labels_bprime{"B1'", "B2'", "B2½", "B3'", "B4'", "B5"};
constexpr std::array<std::string_view, 4> labels_c{"C1", "C2", "C3", "C4"};

constexpr int probe_first = 10;
constexpr int probe_last = 40;
constexpr double cauchy_tol = 1e-6;
constexpr double integrability_margin = 0.01;
constexpr double divergence_slack = 1e-3;
constexpr double growth_margin = 0.01;

std::vector<double> probe_times(double T)
{
    std::vector<double> times;
    for (int j = probe_first; j <= probe_last; ++j) {
        times.push_back(std::ldexp(T, -j));
    }
    return times;
}

std::string fmt(double x)
{
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConditionVerdict verdict(Suite suite, std::string_view label, Verdict v, double measured,
                         std::vector<double> witnesses, std::string note)
{
    ConditionVerdict out;
    out.id = make_condition_id(suite, label);
    out.verdict = v;
    out.measured = measured;
    out.witnesses = std::move(witnesses);
    out.note = std::move(note);
    return out;
}

Verdict both(Verdict x, Verdict y)
{
    if (x == Verdict::Fail || y == Verdict::Fail) return Verdict::Fail;
    if (x == Verdict::Inconclusive || y == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
}

/// Sign check of g over the grid: pass iff min g > 0 (or >= 0 when `strict` is false).
ConditionVerdict grid_sign(Suite suite, std::string_view label,
                           const std::function<double(double)>& g,
                           std::span<const double> grid, bool strict, const std::string& what)
{
    double worst = std::numeric_limits<double>::infinity();
    double where = grid.empty() ? 0.0 : grid.front();
    for (double t : grid) {
        const double v = g(t);
        if (!std::isfinite(v)) {
            return verdict(suite, label, Verdict::Fail, v, {t}, what + " is not finite");
        }
        if (v < worst) {
            worst = v;
            where = t;
        }
    }
    const bool ok = strict ? worst > 0.0 : worst >= 0.0;
    return verdict(suite, label, ok ? Verdict::Pass : Verdict::Fail, worst,
                   ok ? std::vector<double>{} : std::vector<double>{where},
                   "grid min of " + what + (strict ? " (need > 0)" : " (need >= 0)"));
}

/// lim_{t->0+} f = target within 1e-6 (relative to max(1, |grid scale|)).
ConditionVerdict limit_equals(Suite suite, std::string_view label, const TimeFunction& f,
                              double T, double target, double scale, const std::string& what)
{
    const LimitEstimate lim = limit_at_zero(f, T);
    const double tol = cauchy_tol * std::max(1.0, scale);
    if (!lim.stable) {
        return verdict(suite, label, lim.divergent ? Verdict::Fail : Verdict::Inconclusive,
                       lim.estimate, {lim.times.back()},
                       "limit of " + what + " at 0 is unstable");
    }
    const bool ok = std::abs(lim.estimate - target) <= tol;
    return verdict(suite, label, ok ? Verdict::Pass : Verdict::Fail, lim.estimate,
                   ok ? std::vector<double>{} : std::vector<double>{lim.times.back()},
                   "lim " + what + " = " + fmt(lim.estimate) + ", expected " + fmt(target));
}

double grid_abs_max(const TimeFunction& f, std::span<const double> grid)
{
    double m = 0.0;
    for (double t : grid) {
        m = std::max(m, std::abs(f(t)));
    }
    return m;
}

ConditionVerdict boundedness_verdict(Suite suite, std::string_view label,
                                     const std::function<double(double)>& f,
                                     std::span<const double> grid, double T,
                                     const std::string& what)
{
    const BoundednessResult r = bounded_above(f, grid, T);
    std::string note = "sup " + what + " = " + fmt(r.supremum) + ", growth exponent "
                       + fmt(r.exponent);
    std::vector<double> witnesses;
    if (r.verdict != Verdict::Pass) {
        witnesses.push_back(r.witness);
    }
    return verdict(suite, label, r.verdict, r.supremum, std::move(witnesses), std::move(note));
}

ConditionVerdict b5_verdict(Suite suite, const SuiteFunctions& fns, const EstimateContext& ctx,
                            std::span<const double> grid, double tol);

double log_derivative(const TimeFunction& f, double t, double T)
{
    return differentiate(f, t, T).value / f(t);
}

// Coefficient (2k beta + beta')/(1 - beta).
double drive_coefficient(const EstimateContext& ctx, const TimeFunction& beta, double t)
{
    const double be = beta(t);
    return (2.0 * ctx.k * be + differentiate(beta, t, ctx.T).value) / (1.0 - be);
}

const TimeFunction& require(const std::optional<TimeFunction>& f, const char* name, Suite suite)
{
    if (!f) {
        fail(ErrorCode::InvalidParameter,
             std::string("suite ") + std::string(to_string(suite)) + " needs function " + name);
    }
    return *f;
}

}  // namespace

std::string_view to_string(Suite suite)
{
    switch (suite) {
    case Suite::A: return "A";
    case Suite::B: return "B";
    case Suite::Bprime: return "Bprime";
    case Suite::C: return "C";
    }
    return "?";
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<Suite> parse_suite(std::string_view text)
{
    if (text == "A" || text == "a") return Suite::A;
    if (text == "B" || text == "b") return Suite::B;
    if (text == "Bprime" || text == "B'" || text == "bprime") return Suite::Bprime;
    if (text == "C" || text == "c") return Suite::C;
    return std::nullopt;
}

std::span<const std::string_view> suite_labels(Suite suite)
{
    switch (suite) {
    case Suite::A: return labels_a;
    case Suite::B: return labels_b;
    case Suite::Bprime: return labels_bprime;
    case Suite::C: return labels_c;
    }
    return {};
}

ConditionId make_condition_id(Suite suite, std::string_view label)
{
    const auto labels = suite_labels(suite);
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        fail(ErrorCode::InvalidParameter, "condition " + std::string(label)
                                              + " is not part of suite "
                                              + std::string(to_string(suite)));
    }
    return {suite, std::string(label)};
}

bool ConditionReport::passed() const
{
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const ConditionVerdict& v) { return v.verdict == Verdict::Pass; });
}

bool ConditionReport::any_failed() const
{
    return std::any_of(verdicts.begin(), verdicts.end(),
                       [](const ConditionVerdict& v) { return v.verdict == Verdict::Fail; });
}

const ConditionVerdict* ConditionReport::find(std::string_view label) const
{
    for (const auto& v : verdicts) {
        if (v.id.label == label) {
            return &v;
        }
    }
    return nullptr;
}

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (!(lo > 0.0 && hi > lo) || points < 2) {
        fail(ErrorCode::InvalidParameter, "log_grid needs 0 < lo < hi and >= 2 points");
    }
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        grid[i] = lo * std::exp(step * i);
    }
    grid.back() = hi;
    return grid;
}

LimitEstimate limit_at_zero(const TimeFunction& f, double T)
{
    LimitEstimate out;
    out.times = probe_times(T);
    for (double t : out.times) {
        out.values.push_back(f(t));
    }
    const auto& x = out.values;
    const std::size_t m = x.size();
    out.estimate = x.back();
    for (double v : x) {
        if (!std::isfinite(v)) {
            return out;
        }
    }

    // Cauchy test on the last five increments.
    bool cauchy = true;
    for (std::size_t i = m - 5; i < m; ++i) {
        if (std::abs(x[i] - x[i - 1]) > cauchy_tol * std::max(1.0, std::abs(x[i]))) {
            cauchy = false;
        }
    }
    if (!cauchy) {
        bool growing_up = true;
        bool growing_down = true;
        for (std::size_t i = m - 5; i < m; ++i) {
            const double d = x[i] - x[i - 1];
            const double d_prev = x[i - 1] - x[i - 2];
            const bool expanding = std::abs(d) >= 0.9 * std::abs(d_prev);
            growing_up = growing_up && d > 0.0 && expanding;
            growing_down = growing_down && d < 0.0 && expanding;
        }
        if (growing_up || growing_down) {
            out.divergent = true;
            out.estimate = growing_up ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
        }
        return out;
    }
    out.stable = true;
    const double d1 = x[m - 1] - x[m - 2];
    const double d2 = x[m - 1] - 2.0 * x[m - 2] + x[m - 3];
    if (d2 != 0.0) {
        const double aitken = x[m - 1] - d1 * d1 / d2;
        if (std::isfinite(aitken) && std::abs(aitken - x[m - 1]) <= std::abs(d1) * 1e3 + 1e-300) {
            out.estimate = aitken;
        }
    }
    return out;
}

IntegrabilityResult integrability_at_zero(const TimeFunction& f, double T)
{
    IntegrabilityResult out;
    const auto times = probe_times(T);
    std::vector<double> lx;
    std::vector<double> ly;
    for (double t : times) {
        const double v = f(t);
        if (v < 0.0) {
            std::ostringstream msg;
            msg << "integrand negative near 0: f(" << t << ") = " << v;
            fail(ErrorCode::InvalidParameter, msg.str());
        }
        if (!std::isfinite(v)) {
            out.verdict = Verdict::Fail;
            out.witness = t;
            out.exponent = -std::numeric_limits<double>::infinity();
            out.note = "integrand not finite near 0";
            return out;
        }
        if (v > 0.0) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(v));
        }
    }
    out.witness = times.back();
    if (lx.size() < 5) {
        out.verdict = Verdict::Pass;
        out.exponent = std::numeric_limits<double>::infinity();
        out.note = "integrand vanishes near 0";
        return out;
    }
    out.exponent = least_squares_slope(lx, ly);
    if (out.exponent <= -1.0 + divergence_slack) {
        out.verdict = Verdict::Fail;
        out.note = "fitted exponent " + fmt(out.exponent)
                   + " is -1 or below (within 1e-3): not integrable at 0";
        return out;
    }
    if (out.exponent <= -1.0 + integrability_margin) {
        out.verdict = Verdict::Inconclusive;
        out.note = "fitted exponent " + fmt(out.exponent) + " within margin of -1";
        return out;
    }
    try {
        const double total = integrate_from_zero(f, T);
        out.verdict = Verdict::Pass;
        out.note = "exponent " + fmt(out.exponent) + ", integral over (0,T) = " + fmt(total);
    } catch (const Error& e) {
        out.verdict = Verdict::Fail;
        out.note = std::string("partial integrals did not converge: ") + e.what();
    }
    return out;
}

BoundednessResult bounded_above(const std::function<double(double)>& f,
                                std::span<const double> grid, double T)
{
    BoundednessResult out;
    out.supremum = -std::numeric_limits<double>::infinity();
    auto visit = [&](double t, double v) {
        if (v > out.supremum || std::isnan(v)) {
            out.supremum = v;
            out.witness = t;
        }
    };
    for (double t : grid) {
        visit(t, f(t));
    }
    const auto times = probe_times(T);
    std::vector<double> values;
    for (double t : times) {
        values.push_back(f(t));
        visit(t, values.back());
    }
    if (!std::isfinite(out.supremum)) {
        out.verdict = Verdict::Fail;
        return out;
    }
    // Growth toward 0 on the deepest probes where f is positive.
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] > 0.0) {
            lx.push_back(std::log(times[i]));
            ly.push_back(std::log(values[i]));
        }
    }
    out.verdict = Verdict::Pass;
    if (lx.size() >= 5 && values.back() > 0.0) {
        // Fit on the deepest half so that transients near T 2^-10 do not dominate.
        const std::size_t half = lx.size() / 2;
        const std::vector<double> x(lx.begin() + half, lx.end());
        const std::vector<double> y(ly.begin() + half, ly.end());
        out.exponent = least_squares_slope(x, y);
        if (out.exponent < -growth_margin) {
            out.verdict = Verdict::Fail;
            out.witness = times.back();
        }
    }
    return out;
}

namespace {

ConditionVerdict b5_verdict(Suite suite, const SuiteFunctions& fns, const EstimateContext& ctx,
                            std::span<const double> grid, double tol)
{
    const double n = ctx.n;
    double worst = 0.0;
    double where = grid.front();
    bool lower_accuracy = false;
    for (double t : grid) {
        const double be = (*fns.beta)(t);
        if (!(be > 0.0 && be < 1.0)) {
            return verdict(suite, "B5", Verdict::Fail, be, {t}, "beta outside (0,1)");
        }
        const auto dbeta = differentiate(*fns.beta, t, ctx.T);
        const auto dpsi = differentiate(*fns.psi, t, ctx.T);
        lower_accuracy = lower_accuracy || dbeta.lower_accuracy || dpsi.lower_accuracy;
        const double drive = 2.0 * ctx.k * be + dbeta.value;
        const double residual = dpsi.value + drive / (1.0 - be) * (*fns.psi)(t)
                                - n * drive * drive / (8.0 * be * (1.0 - be) * (1.0 - be));
        const double scaled = std::abs(residual) / (1.0 + std::abs(dpsi.value));
        if (!(scaled <= worst)) {
            worst = scaled;
            where = t;
        }
    }
    const bool ok = worst <= tol;
    std::string note = "max |residual|/(1+|psi'|) = " + fmt(worst) + " (tol " + fmt(tol) + ")";
    if (lower_accuracy) {
        note += "; some derivatives used reduced stencils";
    }
    return verdict(suite, "B5", ok ? Verdict::Pass : Verdict::Fail, worst,
                   ok ? std::vector<double>{} : std::vector<double>{where}, std::move(note));
}

ConditionVerdict positive_and_increasing(Suite suite, std::string_view label,
                                         const TimeFunction& f, std::span<const double> grid,
                                         double T, const std::string& name)
{
    auto pos = grid_sign(suite, label, [&](double t) { return f(t); }, grid, true, name);
    const bool fd = !f.has_derivative();
    auto inc = grid_sign(
        suite, label, [&](double t) { return differentiate(f, t, T).value; }, grid, true,
        name + "'");
    if (pos.verdict != Verdict::Pass) {
        return pos;
    }
    if (fd) {
        inc.note += " [finite-difference derivative, lower accuracy]";
    }
    return inc;
}

ConditionReport check_suite_a(const SuiteFunctions& fns, const EstimateContext& ctx,
                              std::span<const double> grid)
{
    const TimeFunction& a = require(fns.a, "a", Suite::A);
    const double T = ctx.T;
    ConditionReport report;

    report.verdicts.push_back(positive_and_increasing(Suite::A, "A1", a, grid, T, "a"));

    {
        auto at_zero = limit_equals(Suite::A, "A2", a, T, 0.0, grid_abs_max(a, grid), "a");
        TimeFunction ratio = make_time_function(
            [&](double t) { return a(t) / differentiate(a, t, T).value; }, "a/a'");
        auto ratio_zero =
            limit_equals(Suite::A, "A2", ratio, T, 0.0, grid_abs_max(ratio, grid), "a/a'");
        ConditionVerdict v = at_zero;
        v.verdict = both(at_zero.verdict, ratio_zero.verdict);
        v.measured = ratio_zero.measured;
        v.note = at_zero.note + "; " + ratio_zero.note;
        if (v.verdict != Verdict::Pass && v.witnesses.empty()) {
            v.witnesses = ratio_zero.witnesses;
        }
        report.verdicts.push_back(std::move(v));
    }

    {
        TimeFunction integrand = make_time_function(
            [&](double t) {
                const double d = differentiate(a, t, T).value;
                return d * d / a(t);
            },
            "a'^2/a");
        const auto integ = integrability_at_zero(integrand, T);
        report.verdicts.push_back(verdict(
            Suite::A, "A3", integ.verdict, integ.exponent,
            integ.verdict == Verdict::Pass ? std::vector<double>{} : std::vector<double>{integ.witness},
            integ.note));
    }
    return report;
}

ConditionVerdict b4_verdict(const TimeFunction& psi, double T)
{
    const LimitEstimate lim = limit_at_zero(psi, T);
    if (lim.stable) {
        const bool ok = lim.estimate >= -cauchy_tol * std::max(1.0, std::abs(lim.estimate));
        return verdict(Suite::B, "B4", ok ? Verdict::Pass : Verdict::Fail, lim.estimate,
                       ok ? std::vector<double>{} : std::vector<double>{lim.times.back()},
                       "limit of psi at 0 = " + fmt(lim.estimate));
    }
    if (lim.divergent) {
        const bool ok = lim.estimate > 0.0;
        return verdict(Suite::B, "B4", ok ? Verdict::Pass : Verdict::Fail, lim.estimate,
                       ok ? std::vector<double>{} : std::vector<double>{lim.times.back()},
                       ok ? "psi -> +inf at 0" : "psi -> -inf at 0");
    }
    // Unstable: decide on the sign of the probe tail (limsup proxy).
    const auto tail_begin = lim.values.end() - 10;
    const double lo = *std::min_element(tail_begin, lim.values.end());
    const double hi = *std::max_element(tail_begin, lim.values.end());
    if (lo >= 0.0) {
        return verdict(Suite::B, "B4", Verdict::Pass, lo, {},
                       "limit unstable; tail infimum of psi >= 0");
    }
    if (hi < 0.0) {
        return verdict(Suite::B, "B4", Verdict::Fail, hi, {lim.times.back()},
                       "limit unstable; psi < 0 throughout the tail");
    }
    return verdict(Suite::B, "B4", Verdict::Inconclusive, lo, {lim.times.back()},
                   "limit unstable; psi changes sign in the tail");
}

ConditionReport check_suite_b(const SuiteFunctions& fns, const EstimateContext& ctx,
                              std::span<const double> grid, const CheckOptions& options)
{
    const TimeFunction& lambda = require(fns.lambda, "lambda", Suite::B);
    const TimeFunction& beta = require(fns.beta, "beta", Suite::B);
    const TimeFunction& psi = require(fns.psi, "psi", Suite::B);
    const double T = ctx.T;
    ConditionReport report;

    {
        auto lower = grid_sign(Suite::B, "B1", beta, grid, true, "beta");
        auto upper = grid_sign(Suite::B, "B1", [&](double t) { return 1.0 - beta(t); }, grid,
                               true, "1 - beta");
        report.verdicts.push_back(lower.verdict != Verdict::Pass ? lower : upper);
    }
    {
        auto lim = limit_equals(Suite::B, "B2", lambda, T, 0.0, grid_abs_max(lambda, grid),
                                "lambda");
        auto pos = grid_sign(Suite::B, "B2", lambda, grid, true, "lambda");
        report.verdicts.push_back(lim.verdict != Verdict::Pass ? lim : pos);
    }
    report.verdicts.push_back(grid_sign(
        Suite::B, "B3",
        [&](double t) { return drive_coefficient(ctx, beta, t) - log_derivative(lambda, t, T); },
        grid, true, "(2k beta + beta')/(1 - beta) - (ln lambda)'"));
    report.verdicts.push_back(b4_verdict(psi, T));
    report.verdicts.push_back(b5_verdict(Suite::B, fns, ctx, grid, options.b5_tolerance));
    return report;
}

ConditionReport check_suite_bprime(const SuiteFunctions& fns, const EstimateContext& ctx,
                                   const SuiteExtras& extras, std::span<const double> grid,
                                   const CheckOptions& options)
{
    const TimeFunction& lambda = require(fns.lambda, "lambda", Suite::Bprime);
    const TimeFunction& beta = require(fns.beta, "beta", Suite::Bprime);
    const TimeFunction& psi = require(fns.psi, "psi", Suite::Bprime);
    const double T = ctx.T;
    const Suite s = Suite::Bprime;
    ConditionReport report;

    {
        auto lim = limit_equals(s, "B1'", beta, T, 1.0, 1.0, "beta");
        auto lower = grid_sign(s, "B1'", beta, grid, true, "beta");
        auto upper = grid_sign(s, "B1'", [&](double t) { return 1.0 - beta(t); }, grid, true,
                               "1 - beta");
        report.verdicts.push_back(lim.verdict != Verdict::Pass     ? lim
                                  : lower.verdict != Verdict::Pass ? lower
                                                                   : upper);
    }
    {
        auto lim = limit_equals(s, "B2'", lambda, T, 0.0, grid_abs_max(lambda, grid), "lambda");
        auto inc = grid_sign(
            s, "B2'", [&](double t) { return differentiate(lambda, t, T).value; }, grid, true,
            "lambda'");
        report.verdicts.push_back(lim.verdict != Verdict::Pass ? lim : inc);
    }
    {
        auto ratio = boundedness_verdict(
            s, "B2½", [&](double t) { return lambda(t) / (1.0 - beta(t)); }, grid, T,
            "lambda/(1 - beta)");
        auto slope = boundedness_verdict(
            s, "B2½", [&](double t) { return differentiate(beta, t, T).value; }, grid, T,
            "beta'");
        ConditionVerdict v = ratio.verdict != Verdict::Pass ? ratio : slope;
        if (v.verdict == Verdict::Pass) {
            v.note = ratio.note + "; " + slope.note;
        }
        report.verdicts.push_back(std::move(v));
    }
    {
        auto margin_at = [&](double eps) {
            return grid_sign(
                s, "B3'",
                [&, eps](double t) {
                    return drive_coefficient(ctx, beta, t)
                           - (1.0 + eps) * log_derivative(lambda, t, T);
                },
                grid, true, "(2k beta + beta')/(1 - beta) - (1+eps)(ln lambda)'");
        };
        if (extras.epsilon) {
            report.epsilon = *extras.epsilon;
            report.verdicts.push_back(margin_at(*extras.epsilon));
        } else {
            std::optional<ConditionVerdict> first_fail;
            bool found = false;
            for (double eps : {1e-3, 1e-2, 1e-1, 1.0}) {
                auto v = margin_at(eps);
                if (v.verdict == Verdict::Pass) {
                    v.note += "; epsilon scanned, first passing = " + fmt(eps);
                    report.epsilon = eps;
                    report.verdicts.push_back(std::move(v));
                    found = true;
                    break;
                }
                if (!first_fail) {
                    first_fail = std::move(v);
                }
            }
            if (!found) {
                first_fail->note += "; no epsilon in {1e-3,1e-2,1e-1,1} passes";
                report.verdicts.push_back(std::move(*first_fail));
            }
        }
    }
    report.verdicts.push_back(grid_sign(s, "B4'", psi, grid, false, "psi"));
    report.verdicts.push_back(b5_verdict(s, fns, ctx, grid, options.b5_tolerance));
    return report;
}

ConditionVerdict c1_verdict(const TimeFunction& b, std::span<const double> grid, double T)
{
    auto lim = limit_equals(Suite::C, "C1", b, T, 0.0, grid_abs_max(b, grid), "b");
    auto inc = grid_sign(
        Suite::C, "C1", [&](double t) { return differentiate(b, t, T).value; }, grid, true, "b'");
    if (!b.has_derivative()) {
        inc.note += " [finite-difference derivative, lower accuracy]";
    }
    return lim.verdict != Verdict::Pass ? lim : inc;
}

ConditionVerdict c2_verdict(const TimeFunction& b, double T)
{
    TimeFunction integrand = make_time_function(
        [&](double t) {
            const double d = differentiate(b, t, T).value;
            const double bt = b(t);
            return bt == 0.0 && d == 0.0 ? 0.0 : d * d / bt;
        },
        "b'^2/b");
    const auto integ = integrability_at_zero(integrand, T);
    return verdict(Suite::C, "C2", integ.verdict, integ.exponent,
                   integ.verdict == Verdict::Pass ? std::vector<double>{}
                                                  : std::vector<double>{integ.witness},
                   integ.note);
}

ConditionReport check_suite_c(const SuiteFunctions& fns, const EstimateContext& ctx,
                              const SuiteExtras& extras, std::span<const double> grid)
{
    const TimeFunction& b = require(fns.b, "b", Suite::C);
    const double T = ctx.T;
    if (!(ctx.k > 0.0)) {
        fail(ErrorCode::KZeroUnsupported, "suite C requires k > 0");
    }
    ConditionReport report;
    report.verdicts.push_back(c1_verdict(b, grid, T));
    report.verdicts.push_back(c2_verdict(b, T));

    {
        auto c3_at = [&](double delta) {
            return boundedness_verdict(
                Suite::C, "C3",
                [&, delta](double t) {
                    return differentiate(b, t, T).value / std::pow(b(t), delta);
                },
                grid, T, "b'/b^delta");
        };
        if (extras.delta) {
            if (!(*extras.delta > 0.0 && *extras.delta < 1.0)) {
                fail(ErrorCode::InvalidParameter, "delta must lie in (0,1)");
            }
            report.delta = *extras.delta;
            report.verdicts.push_back(c3_at(*extras.delta));
        } else {
            std::optional<ConditionVerdict> first_fail;
            bool found = false;
            for (int i = 1; i <= 9; ++i) {
                const double delta = 0.1 * i;
                auto v = c3_at(delta);
                if (v.verdict == Verdict::Pass) {
                    v.note += "; delta scanned, first passing = " + fmt(delta);
                    report.delta = delta;
                    report.verdicts.push_back(std::move(v));
                    found = true;
                    break;
                }
                if (!first_fail) {
                    first_fail = std::move(v);
                }
            }
            if (!found) {
                first_fail->note += "; no delta in {0.1,...,0.9} passes";
                report.verdicts.push_back(std::move(*first_fail));
            }
        }
    }
    {
        auto running = std::make_shared<CumulativeIntegral>(b.value, T);
        report.verdicts.push_back(boundedness_verdict(
            Suite::C, "C4",
            [&, running](double t) {
                const double bt = b(t);
                return differentiate(b, t, T).value * (*running)(t) / (bt * bt);
            },
            grid, T, "b' int_0^t b / b^2"));
    }
    return report;
}

}  // namespace

ConditionReport check_suite(Suite suite, const SuiteFunctions& fns, const EstimateContext& ctx,
                            const SuiteExtras& extras, const CheckOptions& options)
{
    validate(ctx);
    if (options.grid_points < 200) {
        fail(ErrorCode::InvalidParameter, "condition grids need at least 200 points");
    }
    const auto grid = log_grid(options.grid_floor * ctx.T, ctx.T, options.grid_points);
    ConditionReport report;
    switch (suite) {
    case Suite::A: report = check_suite_a(fns, ctx, grid); break;
    case Suite::B: report = check_suite_b(fns, ctx, grid, options); break;
    case Suite::Bprime: report = check_suite_bprime(fns, ctx, extras, grid, options); break;
    case Suite::C: report = check_suite_c(fns, ctx, extras, grid); break;
    }
    report.suite = suite;
    report.grid = grid;
    report.k = ctx.k;
    report.T = ctx.T;
    return report;
}

ConditionReport check_generation_hypotheses(const TimeFunction& b, const EstimateContext& ctx,
                                            const CheckOptions& options)
{
    validate(ctx);
    const auto grid = log_grid(options.grid_floor * ctx.T, ctx.T, options.grid_points);
    ConditionReport report;
    report.suite = Suite::C;
    report.grid = grid;
    report.k = ctx.k;
    report.T = ctx.T;
    report.verdicts.push_back(c1_verdict(b, grid, ctx.T));
    report.verdicts.push_back(c2_verdict(b, ctx.T));
    return report;
}

}  // namespace gradest
