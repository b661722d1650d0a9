#include "gradest/tridiagonal.hpp"

#include "gradest/errors.hpp"

#include <vector>

namespace gradest {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<const double> rhs,
                       std::span<double> x)
{
    const std::size_t m = diag.size();
    if (m == 0 || lower.size() != m || upper.size() != m || rhs.size() != m || x.size() != m) {
        fail(ErrorCode::SolverFailure, "tridiagonal system size mismatch");
    }
    std::vector<double> c_prime(m);
    if (diag[0] == 0.0) {
        fail(ErrorCode::SolverFailure, "zero pivot in tridiagonal solve");
    }
    c_prime[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];

    // Forward sweep
    for (std::size_t i = 1; i < m; ++i) {
        const double pivot = diag[i] - lower[i] * c_prime[i - 1];
        if (pivot == 0.0) {
            fail(ErrorCode::SolverFailure, "zero pivot in tridiagonal solve");
        }
        c_prime[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }

    // Back substitution
    for (std::size_t i = m - 1; i > 0; --i) {
        x[i - 1] -= c_prime[i - 1] * x[i];
    }
}

}  // namespace gradest
