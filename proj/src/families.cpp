#include "gradest/families.hpp"

#include "gradest/errors.hpp"
#include "gradest/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace gradest {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 10> family_names{{
    {Family::LYD, "lyd"},
    {Family::Hamilton, "hamilton"},
    {Family::LiXuHyperbolic, "lixu-hyperbolic"},
    {Family::LiXuLinear, "lixu-linear"},
    {Family::QianTheta, "qian-theta"},
    {Family::ImprovedLYD, "improved-lyd"},
    {Family::Cor18Case1, "cor18-case1"},
    {Family::Cor18Case2, "cor18-case2"},
    {Family::Cor18Case3, "cor18-case3"},
    {Family::GeneratedFromB, "generated-from-b"},
}};

constexpr std::array<Family, 9> closed_forms{
    Family::LYD,         Family::Hamilton,   Family::LiXuHyperbolic,
    Family::LiXuLinear,  Family::QianTheta,  Family::ImprovedLYD,
    Family::Cor18Case1,  Family::Cor18Case2, Family::Cor18Case3,
};

std::size_t expected_param_count(Family family)
{
    switch (family) {
    case Family::LYD:
    case Family::ImprovedLYD:
    case Family::QianTheta: return 1;
    case Family::Cor18Case1:
    case Family::Cor18Case2: return 2;
    case Family::Cor18Case3: return 3;
    default: return 0;
    }
}

bool divides_by_k(Family family)
{
    switch (family) {
    case Family::ImprovedLYD:
    case Family::Cor18Case1:
    case Family::Cor18Case2:
    case Family::Cor18Case3: return true;
    default: return false;
    }
}

void require_open_unit(double x, const char* what)
{
    if (!(x > 0.0 && x < 1.0)) {
        std::ostringstream msg;
        msg << what << " = " << x << " must lie in (0,1)";
        fail(ErrorCode::InvalidParameter, msg.str());
    }
}

std::string format_param(double x)
{
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

// beta-form psi of the improved Li-Yau-Davies estimate.
double improved_lyd_psi(int n, double k, double beta, double t)
{
    const double shift = (1.0 - beta) / (k * beta);
    return n * (1.0 - beta) / (16.0 * k * (t - shift) * t) + n * k / (4.0 * (1.0 - beta));
}

}  // namespace

std::string_view family_name(Family family)
{
    for (const auto& [f, name] : family_names) {
        if (f == family) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name)
{
    for (const auto& [f, label] : family_names) {
        if (label == name) {
            return f;
        }
    }
    return std::nullopt;
}

std::span<const Family> closed_form_families()
{
    return closed_forms;
}

double cor18_case3_threshold(double k, double beta, double gamma, double theta)
{
    const double shift = (1.0 - beta) / (k * beta);
    // g decreases strictly from +inf at t = shift to -gamma at infinity.
    auto g = [&](double t) {
        return (1.0 - beta) * std::pow(t, theta - 1.0) / (16.0 * k * (t - shift)) - gamma;
    };
    double lo = shift;
    double hi = 1e6 / k;
    if (!(g(hi) <= 0.0)) {
        fail(ErrorCode::InvalidParameter,
             "case-3 threshold exceeds 1e6/k; gamma too small for this beta, theta");
    }
    while ((hi - lo) > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

GradientBound make_family(const EstimateContext& ctx, Family family,
                          std::span<const double> params)
{
    validate(ctx);
    if (family == Family::GeneratedFromB) {
        fail(ErrorCode::InvalidParameter,
             "generated-from-b bounds are built from a coefficient function");
    }
    if (params.size() != expected_param_count(family)) {
        std::ostringstream msg;
        msg << family_name(family) << " expects " << expected_param_count(family)
            << " parameter(s), got " << params.size();
        fail(ErrorCode::InvalidParameter, msg.str());
    }
    for (double p : params) {
        if (!std::isfinite(p)) {
            fail(ErrorCode::InvalidParameter, "non-finite family parameter");
        }
    }
    if (divides_by_k(family) && ctx.k == 0.0) {
        fail(ErrorCode::KZeroUnsupported,
             std::string(family_name(family)) + " requires k > 0");
    }

    GradientBound bound;
    bound.family_ = family;
    bound.params_.assign(params.begin(), params.end());
    bound.ctx_ = ctx;
    const double k = ctx.k;

    switch (family) {
    case Family::LYD:
        require_open_unit(params[0], "beta");
        break;
    case Family::QianTheta:
        require_open_unit(params[0], "theta");
        break;
    case Family::ImprovedLYD: {
        const double beta = params[0];
        require_open_unit(beta, "beta");
        bound.t_min_ = (1.0 - beta) / (k * beta);
        break;
    }
    case Family::Cor18Case1: {
        const double beta = params[0];
        const double gamma = params[1];
        require_open_unit(beta, "beta");
        const double floor = (1.0 - beta) / (16.0 * k);
        if (!(gamma > floor)) {
            fail(ErrorCode::InvalidParameter, "case 1 needs gamma > (1-beta)/(16k)");
        }
        bound.t_min_ = gamma * (1.0 - beta) / (k * beta * (gamma - floor));
        break;
    }
    case Family::Cor18Case2: {
        const double beta = params[0];
        const double gamma = params[1];
        require_open_unit(beta, "beta");
        if (!(gamma > 0.0)) {
            fail(ErrorCode::InvalidParameter, "case 2 needs gamma > 0");
        }
        bound.t_min_ = (1.0 - beta) / (16.0 * k * gamma) + (1.0 - beta) / (k * beta);
        break;
    }
    case Family::Cor18Case3: {
        const double beta = params[0];
        const double gamma = params[1];
        const double theta = params[2];
        require_open_unit(beta, "beta");
        if (!(gamma > 0.0)) {
            fail(ErrorCode::InvalidParameter, "case 3 needs gamma > 0");
        }
        if (!(theta > 1.0 && theta < 2.0)) {
            fail(ErrorCode::InvalidParameter, "case 3 needs theta in (1,2)");
        }
        bound.t_min_ = cor18_case3_threshold(k, beta, gamma, theta);
        break;
    }
    default:
        break;
    }

    if (!(bound.t_min_ < ctx.T)) {
        std::ostringstream msg;
        msg << bound.id() << " is valid only for t > " << bound.t_min_
            << ", beyond horizon T = " << ctx.T;
        fail(ErrorCode::EmptyDomain, msg.str());
    }
    return bound;
}

GradientBound make_generated_bound(const EstimateContext& ctx, GeneratedProfile profile)
{
    validate(ctx);
    GradientBound bound;
    bound.family_ = Family::GeneratedFromB;
    bound.params_ = profile.source_params;
    bound.ctx_ = ctx;
    bound.t_min_ = 0.0;
    bound.profile_ = std::make_shared<const GeneratedProfile>(std::move(profile));
    return bound;
}

std::string GradientBound::id() const
{
    std::string out(family_name(family_));
    if (family_ == Family::GeneratedFromB) {
        out += "[" + (profile_ ? profile_->source : std::string("?")) + "]";
        return out;
    }
    if (!params_.empty()) {
        out += "(";
        for (std::size_t i = 0; i < params_.size(); ++i) {
            if (i > 0) {
                out += ",";
            }
            out += format_param(params_[i]);
        }
        out += ")";
    }
    return out;
}

bool GradientBound::valid_at(double t) const
{
    return t > t_min_ && t <= ctx_.T * (1.0 + 1e-12);
}

GradientBound GradientBound::with_horizon(double T) const
{
    GradientBound copy = *this;
    copy.ctx_.T = T;
    validate(copy.ctx_);
    return copy;
}

BoundSample GradientBound::evaluate(double t) const
{
    if (!valid_at(t)) {
        std::ostringstream msg;
        msg << id() << " evaluated at t = " << t << " outside (" << t_min_ << ", "
            << ctx_.T << "]";
        fail(ErrorCode::OutOfDomain, msg.str());
    }
    const double n = ctx_.n;
    const double k = ctx_.k;
    BoundSample s;
    s.t = t;

    // Families quoted in alpha-form are converted once here; everything
    // downstream reads beta and psi.
    auto from_alpha = [&s](double alpha, double phi) {
        s.beta = 1.0 / alpha;
        s.psi = phi / alpha;
    };

    switch (family_) {
    case Family::LYD: {
        const double beta = params_[0];
        s.beta = beta;
        s.psi = n / (2.0 * beta * t) + n * k / (4.0 * (1.0 - beta));
        break;
    }
    case Family::Hamilton:
        s.beta = std::exp(-2.0 * k * t);
        s.psi = std::exp(2.0 * k * t) * n / (2.0 * t);
        break;
    case Family::LiXuHyperbolic: {
        const double x = k * t;
        const double alpha = 1.0 + special::lixu_excess(x);
        // (nk/2) coth(kt) written as (n/(2t)) * kt coth(kt) so that k = 0 is the limit.
        const double phi = n / (2.0 * t) * special::x_coth_x(x) + n * k / 2.0;
        from_alpha(alpha, phi);
        break;
    }
    case Family::LiXuLinear: {
        const double alpha = 1.0 + 2.0 * k * t / 3.0;
        const double phi = n / (2.0 * t) + n * k / 2.0 * (1.0 + k * t / 3.0);
        from_alpha(alpha, phi);
        break;
    }
    case Family::QianTheta: {
        const double theta = params_[0];
        const double alpha = 1.0 + theta * k * t;
        const double phi = (2.0 - theta) * (2.0 - theta) * n / (16.0 * theta * (1.0 - theta) * t)
                           + n * k * k * theta * t / 4.0 + n * k / 2.0;
        from_alpha(alpha, phi);
        break;
    }
    case Family::ImprovedLYD: {
        const double beta = params_[0];
        s.beta = beta;
        s.psi = improved_lyd_psi(ctx_.n, k, beta, t);
        break;
    }
    case Family::Cor18Case1: {
        const double beta = params_[0];
        s.beta = beta;
        s.psi = params_[1] * n / (t * t) + n * k / (4.0 * (1.0 - beta));
        break;
    }
    case Family::Cor18Case2: {
        const double beta = params_[0];
        s.beta = beta;
        s.psi = params_[1] * n / t + n * k / (4.0 * (1.0 - beta));
        break;
    }
    case Family::Cor18Case3: {
        const double beta = params_[0];
        s.beta = beta;
        s.psi = params_[1] * n / std::pow(t, params_[2]) + n * k / (4.0 * (1.0 - beta));
        break;
    }
    case Family::GeneratedFromB:
        s.beta = profile_->beta(t);
        s.psi = profile_->psi(t);
        break;
    }
    s.alpha = 1.0 / s.beta;
    s.phi = s.psi * s.alpha;
    return s;
}

BoundSample evaluate(const GradientBound& bound, double t)
{
    return bound.evaluate(t);
}

std::pair<TimeFunction, TimeFunction> convert_form(const TimeFunction& alpha,
                                                   const TimeFunction& phi)
{
    auto checked_alpha = [alpha](double t) {
        const double a = alpha(t);
        if (!(a >= 1.0)) {
            std::ostringstream msg;
            msg << "alpha(" << t << ") = " << a << " < 1";
            fail(ErrorCode::InvalidParameter, msg.str());
        }
        return a;
    };
    TimeFunction beta = make_time_function(
        [checked_alpha](double t) { return 1.0 / checked_alpha(t); }, "beta");
    TimeFunction psi = make_time_function(
        [checked_alpha, phi](double t) { return phi(t) / checked_alpha(t); }, "psi");
    if (alpha.zero_limit_hint && *alpha.zero_limit_hint >= 1.0) {
        beta.zero_limit_hint = 1.0 / *alpha.zero_limit_hint;
    }
    return {std::move(beta), std::move(psi)};
}

std::pair<TimeFunction, TimeFunction> convert_form(const TimeFunction& alpha,
                                                   const TimeFunction& phi,
                                                   std::span<const double> sample_times)
{
    for (double t : sample_times) {
        const double a = alpha(t);
        if (!(a >= 1.0)) {
            std::ostringstream msg;
            msg << "alpha(" << t << ") = " << a << " < 1";
            fail(ErrorCode::InvalidParameter, msg.str());
        }
    }
    return convert_form(alpha, phi);
}

std::pair<TimeFunction, TimeFunction> to_alpha_form(const TimeFunction& beta,
                                                    const TimeFunction& psi)
{
    TimeFunction alpha = make_time_function([beta](double t) { return 1.0 / beta(t); }, "alpha");
    TimeFunction phi =
        make_time_function([beta, psi](double t) { return psi(t) / beta(t); }, "phi");
    return {std::move(alpha), std::move(phi)};
}

TimeFunction beta_function(const GradientBound& bound)
{
    if (const auto* p = bound.profile()) {
        return p->beta;
    }
    return make_time_function([bound](double t) { return bound.evaluate(t).beta; },
                              bound.id() + ".beta");
}

TimeFunction psi_function(const GradientBound& bound)
{
    if (const auto* p = bound.profile()) {
        return p->psi;
    }
    return make_time_function([bound](double t) { return bound.evaluate(t).psi; },
                              bound.id() + ".psi");
}

}  // namespace gradest
