#pragma once

#include "gradest/context.hpp"
#include "gradest/time_function.hpp"

#include <functional>
#include <vector>

namespace gradest {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double initial_step = 0.0;  // 0 selects a heuristic
    double min_step = 1e-14;
    int max_steps = 1'000'000;
};

/// Accepted steps of a scalar solution, (t, y, y') per node.
struct OdeTrajectory {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> dy;

    /// Cubic Hermite interpolation between accepted steps.
    double operator()(double time) const;
};

/// Dormand-Prince 5(4) with local error control on y' = rhs(t, y).
OdeTrajectory integrate_dopri5(const std::function<double(double, double)>& rhs, double t0,
                               double y0, double t1, const OdeOptions& options = {});

/// Forward integration of the (B5) linear ODE
///   psi' = -c(t) psi + n (2k beta + beta')^2 / (8 beta (1 - beta)^2),
///   c(t) = (2k beta + beta') / (1 - beta),
/// from psi(t0) = psi0 to t1. Throws InvalidParameter if beta leaves (0,1).
TimeFunction ode_psi_solve(const EstimateContext& ctx, const TimeFunction& beta, double t0,
                           double psi0, double t1, const OdeOptions& options = {});

}  // namespace gradest
