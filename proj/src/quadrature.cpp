#include "gradest/quadrature.hpp"

#include "gradest/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradest {

namespace {

constexpr int min_levels = 8;
constexpr int max_levels = 64;
constexpr double max_decay_ratio = 0.99;

int level_count(double t, double floor)
{
    const int wanted = static_cast<int>(std::ceil(std::log2(t / floor)));
    return std::clamp(wanted, min_levels, max_levels);
}

/// Geometric extrapolation of the remainder below the last level from the
/// last two level contributions. Returns false when they do not decay.
struct TailEstimate {
    bool ok = false;
    bool stable = false;
    double value = 0.0;
    double ratio = 1.0;
};

TailEstimate geometric_tail(double prev2, double prev, double last, double running)
{
    TailEstimate est;
    if (last == 0.0 && prev == 0.0) {
        est.ok = est.stable = true;
        est.ratio = 0.0;
        return est;
    }
    if (prev == 0.0) {
        return est;
    }
    const double r = last / prev;
    est.ratio = r;
    if (r > 0.0 && r < max_decay_ratio) {
        est.ok = true;
        est.value = last * r / (1.0 - r);
        if (prev2 != 0.0) {
            const double r_prev = prev / prev2;
            est.stable = std::abs(r - r_prev) <= 0.05 * (1.0 - r);
        }
        return est;
    }
    // Oscillating or sign-changing contributions that are already negligible.
    if (std::abs(last) + std::abs(prev) <= 1e-14 * std::abs(running)) {
        est.ok = est.stable = true;
        est.value = 0.0;
    }
    return est;
}

}  // namespace

void validate(const QuadratureSpec& spec)
{
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
        fail(ErrorCode::InvalidParameter, "quadrature tolerances must be positive");
    }
    if (spec.t_floor < 0.0) {
        fail(ErrorCode::InvalidParameter, "t_floor must be >= 0");
    }
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec)
{
    if (a == b) {
        return 0.0;
    }
    // Integrate on [-1, 1]: the library's error estimate is in reference units.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&](double x) { return half * f(mid + half * x); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, -1.0, 1.0, 20, spec.rel_tol, &error, &l1);
    if (!std::isfinite(value) || !std::isfinite(error)) {
        std::ostringstream msg;
        msg << "non-finite integrand on [" << a << ", " << b << "]";
        fail(ErrorCode::NonConvergence, msg.str());
    }
    if (error > std::max(1e-6 * l1, spec.abs_tol)) {
        std::ostringstream msg;
        msg << "panel [" << a << ", " << b << "] did not converge (error " << error << ")";
        fail(ErrorCode::NonConvergence, msg.str());
    }
    return value;
}

double integrate_from_zero(const std::function<double(double)>& f, double t,
                           const QuadratureSpec& spec)
{
    validate(spec);
    if (!(t > 0.0)) {
        if (t == 0.0) {
            return 0.0;
        }
        fail(ErrorCode::InvalidParameter, "integrate_from_zero needs t >= 0");
    }
    const double floor = spec.t_floor > 0.0 ? spec.t_floor : 1e-12 * t;
    const int levels = level_count(t, floor);

    double sum = 0.0;
    double p2 = 0.0;
    double p1 = 0.0;
    TailEstimate tail;
    double upper = t;
    for (int j = 0; j < levels; ++j) {
        const double lower = 0.5 * upper;
        const double piece = integrate_interval(f, lower, upper, spec);
        sum += piece;
        upper = lower;
        if (j >= 2) {
            tail = geometric_tail(p2, p1, piece, sum);
            const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(sum + tail.value));
            if (tail.ok && tail.stable && std::abs(tail.value) <= target) {
                return sum + tail.value;
            }
        }
        p2 = p1;
        p1 = piece;
    }
    if (tail.ok) {
        return sum + tail.value;
    }
    std::ostringstream msg;
    msg << "integral from 0 to " << t << " did not converge after " << levels
        << " dyadic levels (decay ratio " << tail.ratio << "); endpoint likely non-integrable";
    fail(ErrorCode::NonConvergence, msg.str());
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double T,
                                       QuadratureSpec spec)
    : f_(std::move(f)), T_(T), spec_(spec)
{
    validate(spec_);
    if (!(T_ > 0.0)) {
        fail(ErrorCode::InvalidParameter, "cumulative integral needs T > 0");
    }
    const double floor = spec_.t_floor > 0.0 ? spec_.t_floor : 1e-12 * T_;
    levels_ = level_count(T_, floor);
}

void CumulativeIntegral::build() const
{
    std::vector<double> pieces(levels_);
    double upper = T_;
    for (int j = 0; j < levels_; ++j) {
        pieces[j] = integrate_interval(f_, 0.5 * upper, upper, spec_);
        upper *= 0.5;
    }
    double running = 0.0;
    for (double p : pieces) {
        running += p;
    }
    const TailEstimate tail =
        geometric_tail(pieces[levels_ - 3], pieces[levels_ - 2], pieces[levels_ - 1], running);
    if (!tail.ok) {
        std::ostringstream msg;
        msg << "cumulative integral on (0, " << T_ << "] did not converge (decay ratio "
            << tail.ratio << "); endpoint likely non-integrable";
        fail(ErrorCode::NonConvergence, msg.str());
    }
    below_.assign(levels_ + 1, 0.0);
    below_[levels_] = tail.value;
    for (int j = levels_ - 1; j >= 0; --j) {
        below_[j] = below_[j + 1] + pieces[j];
    }
}

double CumulativeIntegral::operator()(double t) const
{
    std::call_once(built_, [this] { build(); });
    if (t <= 0.0) {
        return 0.0;
    }
    if (t > T_) {
        return below_[0] + integrate_interval(f_, T_, t, spec_);
    }
    // Level j holds (T 2^{-j-1}, T 2^{-j}].
    int j = static_cast<int>(std::floor(std::log2(T_ / t)));
    double edge = std::ldexp(T_, -j);
    while (j > 0 && t > edge) {
        --j;
        edge = std::ldexp(T_, -j);
    }
    while (t <= 0.5 * edge) {
        ++j;
        edge *= 0.5;
    }
    if (j >= levels_) {
        return integrate_from_zero(f_, t, spec_);
    }
    const double lower = 0.5 * edge;
    return below_[j + 1] + integrate_interval(f_, lower, t, spec_);
}

}  // namespace gradest
