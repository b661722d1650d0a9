#pragma once

#include "gradest/context.hpp"
#include "gradest/families.hpp"
#include "gradest/quadrature.hpp"
#include "gradest/time_function.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gradest {

// Coefficient presets ------------------------------------------------------

/// b(t) = (1 + theta k t) t^{2/theta - 1}; generates beta = 1/(1 + theta k t).
TimeFunction theta_power_b(double theta, double k);

/// b(t) = sinh^2(kt) + sinh(kt) cosh(kt) - kt; generates the Li-Xu hyperbolic bound.
TimeFunction lixu_sinh_b(double k);

/// a(t) = t^p.
TimeFunction power_a(double p);

/// a(t) = sinh^2(kt).
TimeFunction sinh_sq_a(double k);

/// b(t) = a(t) + 2k int_0^t a(s) ds, with b' = a' + 2k a when a' is known.
/// The running integral is tabulated on (0, T].
TimeFunction qian_to_b(const TimeFunction& a, double k, double T,
                       const QuadratureSpec& spec = {});

/// One row of a coefficient table.
struct CoefficientRow {
    double t = 0.0;
    double b = 0.0;
    double bprime = 0.0;
};

/// Piecewise-cubic Hermite b(t) through tabulated (t, b, b') with strictly
/// increasing t. Below the first node b is continued as c t^p with p chosen to
/// match b'/b there; above the last node evaluation fails.
TimeFunction table_b(std::vector<CoefficientRow> rows, std::string label = "table");

/// Reads a CSV with header containing columns t, b, bprime (any order).
std::vector<CoefficientRow> read_coefficient_table(const std::filesystem::path& path);

// Generation ---------------------------------------------------------------

/// beta(t) = 1 - 2k / (b(t) e^{2kt}) int_0^t b(s) e^{2ks} ds. Requires k > 0.
TimeFunction beta_from_b(const EstimateContext& ctx, const TimeFunction& b,
                         const QuadratureSpec& spec = {});

/// psi(t) = n / (8 b(t)) int_0^t b'(s)^2 / (b(s) beta(s)) ds, beta from beta_from_b.
TimeFunction psi_from_b(const EstimateContext& ctx, const TimeFunction& b,
                        const QuadratureSpec& spec = {});

/// Both functions sharing one set of cached running integrals.
std::pair<TimeFunction, TimeFunction> generate_from_b(const EstimateContext& ctx,
                                                      const TimeFunction& b,
                                                      const QuadratureSpec& spec = {});

/// Packages the generated pair as a GeneratedFromB bound after checking the
/// coefficient hypotheses (C1), (C2). Throws ConditionFailure if either fails.
GradientBound bound_from_b(const EstimateContext& ctx, const TimeFunction& b,
                           std::string source, std::vector<double> source_params = {},
                           const QuadratureSpec& spec = {});

/// (2k beta + beta') / (1 - beta) - b'/b at t.
double logderiv_identity_residual(const EstimateContext& ctx, const TimeFunction& b,
                                  const TimeFunction& beta, double t);

/// The linear ODE residual
///   psi' + (2k beta + beta')/(1 - beta) psi - n (2k beta + beta')^2 / (8 beta (1 - beta)^2).
struct B5Residual {
    double residual = 0.0;
    double psi_prime = 0.0;
    bool lower_accuracy = false;
};

B5Residual b5_residual(const EstimateContext& ctx, const TimeFunction& beta,
                       const TimeFunction& psi, double t);

}  // namespace gradest
