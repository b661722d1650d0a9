#include "gradest/ode.hpp"

#include "gradest/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace gradest {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Fifth-order minus embedded fourth-order weights.
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

double OdeTrajectory::operator()(double time) const
{
    if (t.empty()) {
        fail(ErrorCode::OutOfDomain, "empty trajectory");
    }
    const double span = t.back() - t.front();
    if (time < t.front() - 1e-12 * span || time > t.back() + 1e-12 * span) {
        std::ostringstream msg;
        msg << "t = " << time << " outside solved range [" << t.front() << ", " << t.back() << "]";
        fail(ErrorCode::OutOfDomain, msg.str());
    }
    auto it = std::lower_bound(t.begin(), t.end(), time);
    if (it == t.end()) {
        return y.back();
    }
    if (*it == time || it == t.begin()) {
        return y[it - t.begin()];
    }
    const auto i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double s = (time - t[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y[i] + (s3 - 2 * s2 + s) * h * dy[i]
           + (-2 * s3 + 3 * s2) * y[i + 1] + (s3 - s2) * h * dy[i + 1];
}

OdeTrajectory integrate_dopri5(const std::function<double(double, double)>& rhs, double t0,
                               double y0, double t1, const OdeOptions& options)
{
    if (!(t1 > t0)) {
        fail(ErrorCode::InvalidParameter, "ODE integration needs t1 > t0");
    }
    OdeTrajectory out;
    double t = t0;
    double y = y0;
    double k1 = rhs(t, y);
    out.t.push_back(t);
    out.y.push_back(y);
    out.dy.push_back(k1);

    double h = options.initial_step > 0.0 ? options.initial_step : 1e-3 * (t1 - t0);
    const double min_step = options.min_step * std::max(1.0, std::abs(t1));

    for (int step = 0; t < t1; ++step) {
        if (step >= options.max_steps) {
            fail(ErrorCode::SolverFailure, "ODE step budget exhausted");
        }
        if (t + h > t1) {
            h = t1 - t;
        }
        const double k2 = rhs(t + c2 * h, y + h * a21 * k1);
        const double k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = rhs(t + h, y_new);
        const double err_est =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale =
            options.abs_tol + options.rel_tol * std::max(std::abs(y), std::abs(y_new));
        const double err = std::abs(err_est) / scale;

        if (!std::isfinite(err)) {
            fail(ErrorCode::SolverFailure, "non-finite ODE error estimate");
        }
        if (err <= 1.0) {
            t = (h == t1 - t) ? t1 : t + h;
            y = y_new;
            k1 = k7;  // first-same-as-last
            out.t.push_back(t);
            out.y.push_back(y);
            out.dy.push_back(k1);
        }
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < min_step && t < t1) {
            std::ostringstream msg;
            msg << "ODE step size underflow at t = " << t;
            fail(ErrorCode::SolverFailure, msg.str());
        }
    }
    return out;
}

TimeFunction ode_psi_solve(const EstimateContext& ctx, const TimeFunction& beta, double t0,
                           double psi0, double t1, const OdeOptions& options)
{
    validate(ctx);
    if (!(t0 > 0.0 && t0 < t1 && t1 <= ctx.T * (1.0 + 1e-12))) {
        fail(ErrorCode::InvalidParameter, "ode_psi_solve needs 0 < t0 < t1 <= T");
    }
    const double n = ctx.n;
    const double k = ctx.k;
    auto rhs = [&](double t, double psi) {
        const double be = beta(t);
        if (!(be > 0.0 && be < 1.0)) {
            std::ostringstream msg;
            msg << "beta(" << t << ") = " << be << " left (0,1) during integration";
            fail(ErrorCode::InvalidParameter, msg.str());
        }
        const double drive = 2.0 * k * be + differentiate(beta, t, ctx.T).value;
        const double one_minus = 1.0 - be;
        return -drive / one_minus * psi + n * drive * drive / (8.0 * be * one_minus * one_minus);
    };
    auto trajectory = std::make_shared<const OdeTrajectory>(
        integrate_dopri5(rhs, t0, psi0, t1, options));
    TimeFunction psi = make_time_function([trajectory](double t) { return (*trajectory)(t); },
                                          "psi[ode]");
    return psi;
}

}  // namespace gradest
