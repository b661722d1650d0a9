#pragma once

// Hyperbolic expressions that cancel catastrophically near zero in their
// naive form. Each switches to a power series below a fixed radius.

namespace gradest::special {

/// sinh(y) - y.
double sinh_minus_identity(double y);

/// x coth(x), with value 1 at x = 0.
double x_coth_x(double x);

/// (sinh(x) cosh(x) - x) / sinh(x)^2 for x >= 0; ~ 2x/3 near zero, -> 1 as x -> inf.
double lixu_excess(double x);

/// 1/r - coth(r); ~ -r/3 near zero.
double inv_minus_coth(double r);

/// 1/sinh(r)^2 - 1/r^2; -> -1/3 at r = 0.
double inv_sinh_sq_minus_inv_sq(double r);

/// log(r / sinh(r)); 0 at r = 0.
double log_r_over_sinh(double r);

/// coth(r) for r > 0.
double coth(double r);

}  // namespace gradest::special
