#pragma once

#include "gradest/context.hpp"
#include "gradest/time_function.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gradest {

enum class Family {
    LYD,
    Hamilton,
    LiXuHyperbolic,
    LiXuLinear,
    QianTheta,
    ImprovedLYD,
    Cor18Case1,
    Cor18Case2,
    Cor18Case3,
    GeneratedFromB,
};

/// Kebab-case identifier used on the command line and in reports.
std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
std::span<const Family> closed_form_families();

/// One evaluation of an estimate beta |grad f|^2 - f_t <= psi at time t,
/// together with its alpha-form |grad f|^2 - alpha f_t <= phi.
struct BoundSample {
    double t = 0.0;
    double beta = 1.0;
    double psi = 0.0;
    double alpha = 1.0;
    double phi = 0.0;
};

/// beta(t), psi(t) produced from a coefficient function b(t).
struct GeneratedProfile {
    TimeFunction beta;
    TimeFunction psi;
    std::string source;  // e.g. "theta-power(0.5)"
    std::vector<double> source_params;
};

/// An evaluable estimate, valid on (t_min, T]. Immutable.
class GradientBound {
public:
    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const EstimateContext& ctx() const { return ctx_; }
    double t_min() const { return t_min_; }
    const GeneratedProfile* profile() const { return profile_.get(); }

    /// e.g. "lyd(0.5)", "hamilton", "generated-from-b[theta-power(0.5)]".
    std::string id() const;

    bool valid_at(double t) const;
    BoundSample evaluate(double t) const;

    /// Same family and parameters on a different horizon.
    GradientBound with_horizon(double T) const;

private:
    friend GradientBound make_family(const EstimateContext&, Family, std::span<const double>);
    friend GradientBound make_generated_bound(const EstimateContext&, GeneratedProfile);

    Family family_ = Family::LYD;
    std::vector<double> params_;
    EstimateContext ctx_;
    double t_min_ = 0.0;
    std::shared_ptr<const GeneratedProfile> profile_;
};

/// Parameters per family:
///   LYD, ImprovedLYD: {beta};  QianTheta: {theta};
///   Cor18Case1, Cor18Case2: {beta, gamma};  Cor18Case3: {beta, gamma, theta};
///   Hamilton, LiXuHyperbolic, LiXuLinear: {}.
GradientBound make_family(const EstimateContext& ctx, Family family,
                          std::span<const double> params = {});

inline GradientBound make_family(const EstimateContext& ctx, Family family,
                                 std::initializer_list<double> params)
{
    return make_family(ctx, family, std::span<const double>(params.begin(), params.size()));
}

/// Wraps generated (beta, psi); validity starts at 0.
GradientBound make_generated_bound(const EstimateContext& ctx, GeneratedProfile profile);

BoundSample evaluate(const GradientBound& bound, double t);

/// Threshold T0 of the third large-time case: the smallest t past which
/// the improved Li-Yau-Davies psi is below gamma n / t^theta + nk/(4(1-beta)).
double cor18_case3_threshold(double k, double beta, double gamma, double theta);

/// (alpha, phi) -> (beta = 1/alpha, psi = phi/alpha). The returned functions
/// throw InvalidParameter wherever alpha < 1.
std::pair<TimeFunction, TimeFunction> convert_form(const TimeFunction& alpha,
                                                   const TimeFunction& phi);

/// Same, but checks alpha >= 1 eagerly on the given sample times.
std::pair<TimeFunction, TimeFunction> convert_form(const TimeFunction& alpha,
                                                   const TimeFunction& phi,
                                                   std::span<const double> sample_times);

/// (beta, psi) -> (alpha = 1/beta, phi = psi/beta).
std::pair<TimeFunction, TimeFunction> to_alpha_form(const TimeFunction& beta,
                                                    const TimeFunction& psi);

/// beta(t) and psi(t) of a bound as TimeFunctions (no analytic derivatives).
TimeFunction beta_function(const GradientBound& bound);
TimeFunction psi_function(const GradientBound& bound);

}  // namespace gradest
