#pragma once

#include <functional>
#include <optional>
#include <string>

namespace gradest {

/// Scalar function of time on (0, T]. Holds a(t), b(t), lambda(t), beta(t),
/// psi(t) and anything derived from them.
struct TimeFunction {
    std::function<double(double)> value;
    std::optional<std::function<double(double)>> derivative;
    /// Asserted limit as t -> 0+, when known analytically.
    std::optional<double> zero_limit_hint;
    /// Exponent p with value(t) ~ c t^p near zero, when known.
    std::optional<double> power_hint;
    std::string label;

    double operator()(double t) const { return value(t); }
    bool has_derivative() const { return derivative.has_value(); }
};

TimeFunction make_time_function(std::function<double(double)> value,
                                std::string label = {});

TimeFunction make_time_function(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                std::string label = {});

TimeFunction constant_function(double c);

struct DerivativeResult {
    double value = 0.0;
    bool analytic = false;
    /// Set when the stencil had to shrink or go one-sided.
    bool lower_accuracy = false;
};

/// First derivative at t in (0, T]. Uses the analytic derivative when present,
/// otherwise central differences with h = max(1e-7 T, 1e-6 t). Near t = 0 the
/// step shrinks to t/4; at t + h > T a second-order backward stencil is used.
DerivativeResult differentiate(const TimeFunction& f, double t, double T);

}  // namespace gradest
