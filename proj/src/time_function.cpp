#include "gradest/time_function.hpp"

#include "gradest/context.hpp"
#include "gradest/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradest {

void validate(const EstimateContext& ctx)
{
    if (ctx.n < 2) {
        fail(ErrorCode::InvalidParameter, "dimension n must be >= 2");
    }
    if (!(ctx.k >= 0.0) || !std::isfinite(ctx.k)) {
        fail(ErrorCode::InvalidParameter, "Ricci constant k must be >= 0");
    }
    if (!(ctx.T > 0.0) || !std::isfinite(ctx.T)) {
        fail(ErrorCode::InvalidParameter, "horizon T must be > 0");
    }
}

TimeFunction make_time_function(std::function<double(double)> value, std::string label)
{
    TimeFunction f;
    f.value = std::move(value);
    f.label = std::move(label);
    return f;
}

TimeFunction make_time_function(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                std::string label)
{
    TimeFunction f = make_time_function(std::move(value), std::move(label));
    f.derivative = std::move(derivative);
    return f;
}

TimeFunction constant_function(double c)
{
    TimeFunction f = make_time_function([c](double) { return c; },
                                        [](double) { return 0.0; },
                                        "const");
    f.zero_limit_hint = c;
    return f;
}

DerivativeResult differentiate(const TimeFunction& f, double t, double T)
{
    if (!(t > 0.0)) {
        std::ostringstream msg;
        msg << "cannot differentiate at t = " << t;
        fail(ErrorCode::StencilFailure, msg.str());
    }
    if (f.derivative) {
        return {(*f.derivative)(t), true, false};
    }

    double h = std::max(1e-7 * T, 1e-6 * t);
    DerivativeResult out;
    if (t - h <= 0.0) {
        h = 0.25 * t;
        out.lower_accuracy = true;
    }
    if (t + h > T * (1.0 + 1e-12)) {
        // Second-order backward difference.
        const double f0 = f(t);
        const double f1 = f(t - h);
        const double f2 = f(t - 2.0 * h);
        out.value = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h);
        out.lower_accuracy = true;
        return out;
    }
    out.value = (f(t + h) - f(t - h)) / (2.0 * h);
    if (!std::isfinite(out.value)) {
        fail(ErrorCode::StencilFailure, "non-finite difference quotient");
    }
    return out;
}

}  // namespace gradest
