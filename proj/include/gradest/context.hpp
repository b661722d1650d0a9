#pragma once

namespace gradest {

/// Ambient problem data: dimension, Ricci lower bound Ric >= -k g, horizon T.
struct EstimateContext {
    int n = 2;
    double k = 0.0;
    double T = 1.0;
};

/// Throws InvalidParameter unless n >= 2, k >= 0 and T > 0.
void validate(const EstimateContext& ctx);

}  // namespace gradest
