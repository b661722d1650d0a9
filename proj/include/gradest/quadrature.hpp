#pragma once

#include "gradest/time_function.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace gradest {

struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    /// Smallest lower limit used in place of 0. Non-positive selects 1e-12 * t
    /// (1e-12 * T for cumulative tables).
    double t_floor = 0.0;
};

void validate(const QuadratureSpec& spec);

/// Adaptive Gauss-Kronrod on a regular interval [a, b].
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

/// Integral of f over (0, t) for integrands continuous on (0, t] with at most an
/// integrable power singularity at 0. Never evaluates f at 0: the range is cut
/// into dyadic levels [t 2^{-j-1}, t 2^{-j}] and the remainder below the last
/// level is extrapolated from the geometric decay of the level contributions.
/// Throws NonConvergence when the contributions stop decaying.
double integrate_from_zero(const std::function<double(double)>& f, double t,
                           const QuadratureSpec& spec = {});

inline double integrate_from_zero(const TimeFunction& f, double t,
                                  const QuadratureSpec& spec = {})
{
    return integrate_from_zero(f.value, t, spec);
}

/// Running integral t -> int_0^t f over (0, T] backed by a table of dyadic
/// level contributions built once on first use. Each query costs one panel
/// integration. Safe to share between threads.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double T, QuadratureSpec spec = {});

    double operator()(double t) const;
    double horizon() const { return T_; }

private:
    void build() const;

    std::function<double(double)> f_;
    double T_;
    QuadratureSpec spec_;
    int levels_ = 0;

    mutable std::once_flag built_;
    // below_[j] = int_0^{T 2^{-j}} f, j = 0..levels_.
    mutable std::vector<double> below_;
};

}  // namespace gradest
