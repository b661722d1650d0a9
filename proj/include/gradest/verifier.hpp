#pragma once

#include "gradest/families.hpp"
#include "gradest/manifolds.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gradest {

/// Tensor grid of radii and times.
struct GridSpec {
    std::vector<double> r;
    std::vector<double> t;
};

/// r: 0 plus 40 log-spaced points up to data.r_max; t: 60 log-spaced points
/// over the intersection of the data window with the bound's validity.
GridSpec default_grid(const GradientBound& bound, const LogHeatData& data);

struct GridPoint {
    double r = 0.0;
    double t = 0.0;
    double G = 0.0;
};

/// Tolerance policy: exact data uses `absolute` on G; numeric data allows
/// G <= relative * (|f_t| + |grad f|^2) pointwise.
struct Tolerance {
    double absolute = 1e-9;
    double relative = 1e-3;
};

struct VerificationReport {
    std::string bound_id;
    std::string data_id;
    DataKind data_kind = DataKind::Exact;
    GridSpec grid;
    Tolerance tolerance;
    double max_G = 0.0;
    std::pair<double, double> argmax{0.0, 0.0};
    std::vector<GridPoint> violations;
    std::vector<double> margin_curve;  // per t: min over r of -G
    std::vector<double> center_margin; // per t: -G at grid.r[0]
    std::vector<GridPoint> samples;    // full grid, t-major

    bool passed() const { return violations.empty(); }
};

/// G = beta |grad f|^2 - f_t - psi over the grid. Throws HypothesisMismatch
/// if the data's dimension differs or its k exceeds the bound's k, and
/// OutsideWindow if the grid leaves the data window or bound validity.
VerificationReport verify_bound(const GradientBound& bound, const LogHeatData& data,
                                const GridSpec& grid, const Tolerance& tol = {});
VerificationReport verify_bound(const GradientBound& bound, const LogHeatData& data,
                                const Tolerance& tol = {});

/// (n/(2t)) / psi(t) at each time.
std::vector<double> sharpness_ratio(const GradientBound& bound, const std::vector<double>& t_seq);

/// Extrapolated t -> 0 limit of the sharpness ratio along t = 2^-j.
double sharpness_limit(const GradientBound& bound);

struct ComparisonTable {
    std::vector<double> t;
    std::vector<std::string> ids;
    std::vector<std::vector<std::optional<double>>> psi;    // [t][bound], beta form
    std::vector<std::vector<std::optional<double>>> alpha;  // [t][bound]
    std::vector<std::vector<std::optional<double>>> phi;    // [t][bound], alpha form
    std::vector<std::optional<std::size_t>> dominant;       // [t] index of minimal psi
    std::vector<std::optional<std::size_t>> dominant_phi;   // [t] index of minimal phi
};

/// Throws InvalidParameter for an empty list or mismatched (n, k) and
/// EmptyDomain when no grid time lies in every bound's validity.
ComparisonTable compare_bounds(const std::vector<GradientBound>& bounds,
                               const std::vector<double>& t_grid);

/// Time where psi_1 - psi_2 changes sign inside (lo, hi), bisected to
/// relative width 1e-10. Throws NoSignChange or MultipleSignChanges.
double find_crossover(const GradientBound& b1, const GradientBound& b2, double lo, double hi);

struct AsymptoticLimits {
    std::optional<double> alpha_inf;  // empty when divergent
    std::optional<double> phi_inf;
    std::vector<double> t;
    std::vector<double> alpha;
    std::vector<double> phi;
};

/// alpha(t) and phi(t) along t = 2^j / k, j = 1..20, with Aitken extrapolation.
AsymptoticLimits asymptotic_limits(const GradientBound& bound);

struct Theta0Comparison {
    double theta0 = 0.0;
    double qian = 0.0;      // QianTheta(theta0) psi at t0
    double improved = 0.0;  // ImprovedLYD(beta0) psi at t0
    double diff = 0.0;
};

/// theta0 = (1 - beta0)/(k beta0 t0); throws InvalidParameter unless it lies in (0,1).
Theta0Comparison improved_equals_qian_at_theta0(const EstimateContext& ctx, double beta0,
                                                double t0);

struct DominationCheck {
    double threshold = 0.0;
    std::vector<double> t;
    double max_excess = 0.0;  // max of psi_improved - psi_case2
    bool holds = false;
};

/// Improved Li-Yau-Davies psi against the second large-time case on a
/// log grid of `points` times in [threshold, 100 threshold].
DominationCheck cor18_case2_domination(const EstimateContext& ctx, double beta, double gamma,
                                       int points = 100);

}  // namespace gradest
