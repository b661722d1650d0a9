#include "gradest/verifier.hpp"

#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gradest {

namespace {

std::string fmt(double x)
{
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

void check_hypotheses(const GradientBound& bound, const LogHeatData& data)
{
    if (data.n != bound.ctx().n) {
        fail(ErrorCode::HypothesisMismatch, data.id + " has dimension " + std::to_string(data.n)
                                                + " but the bound assumes n = "
                                                + std::to_string(bound.ctx().n));
    }
    if (data.k > bound.ctx().k * (1.0 + 1e-12)) {
        fail(ErrorCode::HypothesisMismatch, data.id + " needs k >= " + fmt(data.k)
                                                + " but the bound assumes k = "
                                                + fmt(bound.ctx().k));
    }
}

/// Limit of a sequence: exact when the increments vanish, Aitken when they
/// contract, empty when they do not.
std::optional<double> sequence_limit(const std::vector<double>& x)
{
    const std::size_t m = x.size();
    if (m < 3) {
        return std::nullopt;
    }
    const double last = x[m - 1];
    if (!std::isfinite(last)) {
        return std::nullopt;
    }
    const double d1 = x[m - 1] - x[m - 2];
    const double d0 = x[m - 2] - x[m - 3];
    const double scale = std::max(1.0, std::abs(last));
    if (std::abs(d1) <= 1e-12 * scale) {
        return last;
    }
    if (d0 == 0.0 || std::abs(d1 / d0) >= 0.9) {
        return std::nullopt;
    }
    return last - d1 * d1 / (d1 - d0);
}

}  // namespace

GridSpec default_grid(const GradientBound& bound, const LogHeatData& data)
{
    GridSpec grid;
    grid.r.push_back(0.0);
    for (double r : log_grid(data.r_max * 1e-3, data.r_max, 40)) {
        grid.r.push_back(r);
    }
    double t_lo = std::max(data.t_lo, bound.t_min() * (1.0 + 1e-3));
    const double t_hi = std::min(data.t_hi, bound.ctx().T);
    if (!(t_lo < t_hi)) {
        fail(ErrorCode::EmptyDomain, bound.id() + " and " + data.id + " share no time window");
    }
    grid.t = log_grid(t_lo, t_hi, 60);
    return grid;
}

VerificationReport verify_bound(const GradientBound& bound, const LogHeatData& data,
                                const Tolerance& tol)
{
    check_hypotheses(bound, data);
    return verify_bound(bound, data, default_grid(bound, data), tol);
}

VerificationReport verify_bound(const GradientBound& bound, const LogHeatData& data,
                                const GridSpec& grid, const Tolerance& tol)
{
    check_hypotheses(bound, data);
    if (grid.r.empty() || grid.t.empty()) {
        fail(ErrorCode::InvalidParameter, "verification grid is empty");
    }
    for (double t : grid.t) {
        if (!bound.valid_at(t)) {
            fail(ErrorCode::OutOfDomain, bound.id() + " is not valid at t = " + fmt(t));
        }
        for (double r : grid.r) {
            if (!data.contains(r, t)) {
                fail(ErrorCode::OutsideWindow,
                     data.id + " has no data at (" + fmt(r) + ", " + fmt(t) + ")");
            }
        }
    }

    const std::size_t nr = grid.r.size();
    const std::size_t nt = grid.t.size();
    std::vector<GridPoint> samples(nr * nt);
    std::vector<double> allowance(nr * nt);
    parallel_for(nt, [&](std::size_t j) {
        const double t = grid.t[j];
        const BoundSample s = bound.evaluate(t);
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = grid.r[i];
            const double gs = data.grad_sq(r, t);
            const double ft = data.f_t(r, t);
            samples[j * nr + i] = {r, t, s.beta * gs - ft - s.psi};
            allowance[j * nr + i] = data.kind == DataKind::Exact
                                        ? tol.absolute
                                        : tol.relative * (std::abs(ft) + gs);
        }
    });

    VerificationReport report;
    report.bound_id = bound.id();
    report.data_id = data.id;
    report.data_kind = data.kind;
    report.grid = grid;
    report.tolerance = tol;
    report.max_G = -std::numeric_limits<double>::infinity();
    report.margin_curve.assign(nt, std::numeric_limits<double>::infinity());
    report.center_margin.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        report.center_margin[j] = -samples[j * nr].G;
        for (std::size_t i = 0; i < nr; ++i) {
            const GridPoint& p = samples[j * nr + i];
            if (!std::isfinite(p.G)) {
                fail(ErrorCode::NonConvergence, "G is not finite at (" + fmt(p.r) + ", "
                                                    + fmt(p.t) + ") for " + report.bound_id);
            }
            if (p.G > report.max_G) {
                report.max_G = p.G;
                report.argmax = {p.r, p.t};
            }
            report.margin_curve[j] = std::min(report.margin_curve[j], -p.G);
            if (p.G > allowance[j * nr + i]) {
                report.violations.push_back(p);
            }
        }
    }
    report.samples = std::move(samples);
    return report;
}

std::vector<double> sharpness_ratio(const GradientBound& bound, const std::vector<double>& t_seq)
{
    std::vector<double> out;
    out.reserve(t_seq.size());
    const double n = bound.ctx().n;
    for (double t : t_seq) {
        out.push_back(n / (2.0 * t) / bound.evaluate(t).psi);
    }
    return out;
}

double sharpness_limit(const GradientBound& bound)
{
    if (bound.t_min() > 0.0) {
        fail(ErrorCode::OutOfDomain, bound.id() + " is only valid for t > " + fmt(bound.t_min()));
    }
    std::vector<double> t_seq;
    for (int j = 10; j <= 30; ++j) {
        t_seq.push_back(std::ldexp(bound.ctx().T, -j));
    }
    const auto ratios = sharpness_ratio(bound, t_seq);
    const std::size_t m = ratios.size();
    return 2.0 * ratios[m - 1] - ratios[m - 2];
}

ComparisonTable compare_bounds(const std::vector<GradientBound>& bounds,
                               const std::vector<double>& t_grid)
{
    if (bounds.empty()) {
        fail(ErrorCode::InvalidParameter, "compare_bounds needs at least one bound");
    }
    const auto& ctx = bounds.front().ctx();
    for (const auto& b : bounds) {
        if (b.ctx().n != ctx.n || b.ctx().k != ctx.k) {
            fail(ErrorCode::InvalidParameter, "compared bounds must share n and k");
        }
    }
    const bool shared = std::any_of(t_grid.begin(), t_grid.end(), [&](double t) {
        return std::all_of(bounds.begin(), bounds.end(),
                           [t](const GradientBound& b) { return b.valid_at(t); });
    });
    if (!shared) {
        fail(ErrorCode::EmptyDomain, "no grid time lies in every bound's validity domain");
    }

    ComparisonTable table;
    table.t = t_grid;
    for (const auto& b : bounds) {
        table.ids.push_back(b.id());
    }
    const std::size_t nb = bounds.size();
    for (double t : t_grid) {
        std::vector<std::optional<double>> psi(nb), alpha(nb), phi(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            if (!bounds[i].valid_at(t)) {
                continue;
            }
            const BoundSample s = bounds[i].evaluate(t);
            psi[i] = s.psi;
            alpha[i] = s.alpha;
            phi[i] = s.phi;
        }
        auto minimal = [&](const std::vector<std::optional<double>>& values) {
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < nb; ++i) {
                if (!values[i]) {
                    continue;
                }
                if (!best || *values[i] < *values[*best]
                    || (*values[i] == *values[*best] && table.ids[i] < table.ids[*best])) {
                    best = i;
                }
            }
            return best;
        };
        table.dominant.push_back(minimal(psi));
        table.dominant_phi.push_back(minimal(phi));
        table.psi.push_back(std::move(psi));
        table.alpha.push_back(std::move(alpha));
        table.phi.push_back(std::move(phi));
    }
    return table;
}

double find_crossover(const GradientBound& b1, const GradientBound& b2, double lo, double hi)
{
    if (!(lo > 0.0 && lo < hi)) {
        fail(ErrorCode::InvalidParameter, "bracket needs 0 < lo < hi");
    }
    for (double t : {lo, hi}) {
        if (!b1.valid_at(t) || !b2.valid_at(t)) {
            fail(ErrorCode::OutOfDomain, "bracket endpoint " + fmt(t) + " outside validity");
        }
    }
    auto diff = [&](double t) { return b1.evaluate(t).psi - b2.evaluate(t).psi; };
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };

    constexpr int samples = 64;
    std::vector<double> ts(samples + 1);
    std::vector<int> signs(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        ts[i] = lo + (hi - lo) * i / samples;
        signs[i] = sign(diff(ts[i]));
    }
    int changes = 0;
    int last_sign = 0;
    std::size_t at = 0;
    for (int i = 0; i <= samples; ++i) {
        if (signs[i] == 0) {
            continue;
        }
        if (last_sign != 0 && signs[i] != last_sign) {
            ++changes;
            at = static_cast<std::size_t>(i);
        }
        last_sign = signs[i];
    }
    if (changes == 0) {
        fail(ErrorCode::NoSignChange, b1.id() + " - " + b2.id() + " keeps one sign on ["
                                          + fmt(lo) + ", " + fmt(hi) + "]");
    }
    if (changes > 1) {
        fail(ErrorCode::MultipleSignChanges,
             b1.id() + " and " + b2.id() + " cross " + std::to_string(changes) + " times");
    }
    double a = ts[at - 1];
    double b = ts[at];
    // Zero samples sit between the two signed neighbours; widen to them.
    while (at > 1 && signs[at - 1] == 0) {
        --at;
        a = ts[at - 1];
    }
    int sa = sign(diff(a));
    while (b - a > 1e-10 * std::abs(b)) {
        const double m = 0.5 * (a + b);
        const int sm = sign(diff(m));
        if (sm == 0) {
            return m;
        }
        if (sm == sa) {
            a = m;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

AsymptoticLimits asymptotic_limits(const GradientBound& bound)
{
    const double unit = bound.ctx().k > 0.0 ? 1.0 / bound.ctx().k : 1.0;
    const GradientBound wide = bound.ctx().T >= std::ldexp(unit, 20)
                                   ? bound
                                   : bound.with_horizon(std::ldexp(unit, 20));
    AsymptoticLimits out;
    for (int j = 1; j <= 20; ++j) {
        const double t = std::ldexp(unit, j);
        if (!wide.valid_at(t)) {
            continue;
        }
        BoundSample s;
        try {
            s = wide.evaluate(t);
        } catch (const Error&) {
            break;
        }
        if (!std::isfinite(s.alpha) || !std::isfinite(s.phi)) {
            break;
        }
        out.t.push_back(t);
        out.alpha.push_back(s.alpha);
        out.phi.push_back(s.phi);
    }
    out.alpha_inf = sequence_limit(out.alpha);
    out.phi_inf = sequence_limit(out.phi);
    return out;
}

Theta0Comparison improved_equals_qian_at_theta0(const EstimateContext& ctx, double beta0,
                                                double t0)
{
    if (!(ctx.k > 0.0)) {
        fail(ErrorCode::KZeroUnsupported, "theta0 substitution needs k > 0");
    }
    if (!(beta0 > 0.0 && beta0 < 1.0)) {
        fail(ErrorCode::InvalidParameter, "beta0 must lie in (0,1)");
    }
    if (!(t0 > 0.0)) {
        fail(ErrorCode::InvalidParameter, "t0 must be positive");
    }
    Theta0Comparison out;
    out.theta0 = (1.0 - beta0) / (ctx.k * beta0 * t0);
    if (!(out.theta0 > 0.0 && out.theta0 < 1.0)) {
        fail(ErrorCode::InvalidParameter, "theta0 = " + fmt(out.theta0) + " is not in (0,1)");
    }
    EstimateContext wide = ctx;
    wide.T = std::max(ctx.T, t0);
    out.qian = make_family(wide, Family::QianTheta, {out.theta0}).evaluate(t0).psi;
    out.improved = make_family(wide, Family::ImprovedLYD, {beta0}).evaluate(t0).psi;
    out.diff = std::abs(out.qian - out.improved);
    return out;
}

DominationCheck cor18_case2_domination(const EstimateContext& ctx, double beta, double gamma,
                                       int points)
{
    if (points < 2) {
        fail(ErrorCode::InvalidParameter, "domination grid needs at least two points");
    }
    EstimateContext wide = ctx;
    const GradientBound probe = [&] {
        EstimateContext c = ctx;
        c.T = std::numeric_limits<double>::max();
        return make_family(c, Family::Cor18Case2, {beta, gamma});
    }();
    DominationCheck out;
    out.threshold = probe.t_min();
    wide.T = std::max(ctx.T, 100.0 * out.threshold);
    const GradientBound improved = make_family(wide, Family::ImprovedLYD, {beta});
    const GradientBound case2 = make_family(wide, Family::Cor18Case2, {beta, gamma});
    out.t = log_grid(out.threshold * (1.0 + 1e-9), 100.0 * out.threshold, points);
    out.max_excess = -std::numeric_limits<double>::infinity();
    bool holds = true;
    for (double t : out.t) {
        const double a = improved.evaluate(t).psi;
        const double b = case2.evaluate(t).psi;
        out.max_excess = std::max(out.max_excess, a - b);
        if (a - b > 1e-12 * std::abs(b)) {
            holds = false;
        }
    }
    out.holds = holds;
    return out;
}

}  // namespace gradest
