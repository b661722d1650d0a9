#include "gradest/special.hpp"

#include <cmath>

namespace gradest::special {

namespace {
constexpr double series_radius = 0.5;
}

double sinh_minus_identity(double y)
{
    if (std::abs(y) >= series_radius) {
        return std::sinh(y) - y;
    }
    // y^3/3! + y^5/5! + ... ; 8 terms leave < 1e-17 relative at |y| = 0.5.
    const double y2 = y * y;
    double term = y * y2 / 6.0;
    double sum = term;
    for (int m = 2; m <= 8; ++m) {
        term *= y2 / ((2.0 * m) * (2.0 * m + 1.0));
        sum += term;
    }
    return sum;
}

double x_coth_x(double x)
{
    if (x == 0.0) {
        return 1.0;
    }
    if (std::abs(x) > 20.0) {
        return x / std::tanh(x);
    }
    const double sinhc = 1.0 + sinh_minus_identity(x) / x;  // sinh(x)/x
    return std::cosh(x) / sinhc;
}

double lixu_excess(double x)
{
    if (x == 0.0) {
        return 0.0;
    }
    if (x > 20.0) {
        const double e = std::exp(-2.0 * x);
        const double inv_sinh_sq = 4.0 * e / ((1.0 - e) * (1.0 - e));
        return 1.0 / std::tanh(x) - x * inv_sinh_sq;
    }
    const double s = std::sinh(x);
    return sinh_minus_identity(2.0 * x) / (2.0 * s * s);
}

double inv_minus_coth(double r)
{
    if (r >= 1.0) {
        return 1.0 / r - coth(r);
    }
    if (r == 0.0) {
        return 0.0;
    }
    // (sinh r - r cosh r) / (r sinh r); numerator = -sum_{m>=1} 2m r^{2m+1}/(2m+1)!
    const double r2 = r * r;
    double pow_fact = r * r2 / 6.0;  // r^{2m+1}/(2m+1)! at m = 1
    double num = -2.0 * pow_fact;
    for (int m = 2; m <= 12; ++m) {
        pow_fact *= r2 / ((2.0 * m) * (2.0 * m + 1.0));
        num -= 2.0 * m * pow_fact;
    }
    const double sinh_r = r + sinh_minus_identity(r);
    return num / (r * sinh_r);
}

double inv_sinh_sq_minus_inv_sq(double r)
{
    if (r == 0.0) {
        return -1.0 / 3.0;
    }
    const double s = (r > 20.0) ? 0.0 : std::sinh(r);
    if (r >= 1.0) {
        if (r > 20.0) {
            const double e = std::exp(-2.0 * r);
            return 4.0 * e / ((1.0 - e) * (1.0 - e)) - 1.0 / (r * r);
        }
        return 1.0 / (s * s) - 1.0 / (r * r);
    }
    // r^2 - sinh^2 r = -sum_{m>=2} (2r)^{2m} / (2 (2m)!)
    const double w2 = 4.0 * r * r;
    double pow_fact = w2 * w2 / 24.0;  // (2r)^4/4!
    double num = -0.5 * pow_fact;
    for (int m = 3; m <= 14; ++m) {
        pow_fact *= w2 / ((2.0 * m - 1.0) * (2.0 * m));
        num -= 0.5 * pow_fact;
    }
    return num / (r * r * s * s);
}

double log_r_over_sinh(double r)
{
    if (r == 0.0) {
        return 0.0;
    }
    if (r > 20.0) {
        // log sinh r = r - log 2 + log1p(-e^{-2r})
        return std::log(r) - (r - std::log(2.0) + std::log1p(-std::exp(-2.0 * r)));
    }
    return -std::log1p(sinh_minus_identity(r) / r);
}

double coth(double r)
{
    return 1.0 / std::tanh(r);
}

}  // namespace gradest::special
