#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gradest {

enum class DataKind { Exact, Numeric };

/// Radial log-heat-kernel data f = log u on a model space with Ric >= -k g.
/// All maps take (r, t) with r the distance from the pole.
struct LogHeatData {
    std::string id;
    int n = 3;
    double k = 0.0;
    DataKind kind = DataKind::Exact;
    double r_max = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;

    std::function<double(double, double)> u;
    std::function<double(double, double)> grad_sq;    // |grad f|^2
    std::function<double(double, double)> f_t;        // d/dt f
    std::function<double(double, double)> laplacian;  // Delta f

    bool contains(double r, double t) const;
};

/// Euclidean heat kernel in R^n: k = 0, |grad f|^2 - f_t = n/(2t) identically.
LogHeatData euclidean_gaussian(int n);

/// Closed-form heat kernel of hyperbolic 3-space (curvature -1, so k = 2).
LogHeatData hyperbolic3_kernel();

/// Region on which exact data is served; default verification grids fill it.
struct DataWindow {
    double r_max = 8.0;
    double t_lo = 0.05;
    double t_hi = 5.0;
};

LogHeatData euclidean_gaussian(int n, const DataWindow& window);
LogHeatData hyperbolic3_kernel(const DataWindow& window);

struct RadialSolverConfig {
    int n = 3;
    double r_max = 12.0;
    int n_r = 1200;
    double dt_initial = 1e-4;
    double dt_growth = 1.01;
    double dt_max = 2e-3;
    double t_start = 0.01;
    double t_end = 2.0;
};

void validate(const RadialSolverConfig& cfg);

/// Leading small-time profile on H^n used to seed the solver:
/// (4 pi t)^{-n/2} (r/sinh r)^{(n-1)/2} exp(-(n-1)^2 t/4 - r^2/(4t)); exact for n = 3.
double hyperbolic_seed_profile(int n, double r, double t);

/// Stored space-time solution of u_t = u_rr + (n-1) coth(r) u_r on [0, r_max].
class RadialSolution {
public:
    RadialSolution(int n, double k, std::vector<double> r, std::vector<double> t,
                   std::vector<std::vector<double>> u);

    int n() const { return n_; }
    double k() const { return k_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& slice(std::size_t j) const { return u_[j]; }

    /// Bilinear interpolation of u.
    double u(double r, double t) const;

    /// Derived f quantities by centered differences at stored nodes,
    /// interpolated bilinearly in (r, t). Needs an interior time index.
    struct Derived {
        double grad_sq = 0.0;
        double f_t = 0.0;
        double laplacian = 0.0;
    };
    Derived derived(double r, double t) const;

    /// Largest r and the time range on which derived quantities are defined
    /// and u is comfortably above underflow (u > 1e-30 for r <= r_max/2).
    double window_r_max() const { return r_.back() / 2.0; }
    std::pair<double, double> window_t() const;

private:
    Derived derived_at_node(std::size_t i, std::size_t j) const;

    int n_;
    double k_;
    std::vector<double> r_;
    std::vector<double> t_;
    std::vector<std::vector<double>> u_;
};

/// Crank-Nicolson time march from the seed profile at t_start to t_end with
/// symmetry at r = 0 and u(r_max) = 0. A step producing u below
/// -1e-14 max u is rejected and retried with half the step.
std::shared_ptr<const RadialSolution> radial_heat_solve(const RadialSolverConfig& cfg);

/// Numeric LogHeatData (k = n - 1) over a stored solution.
LogHeatData numeric_log_heat_data(std::shared_ptr<const RadialSolution> solution);

/// Heat residual Delta f + |grad f|^2 - f_t at each point; throws
/// OutsideWindow for points outside the data window.
std::vector<double> heat_residual(const LogHeatData& data,
                                  std::span<const std::pair<double, double>> points);

void write_radial_solution_csv(const RadialSolution& solution, const std::filesystem::path& path);
std::shared_ptr<const RadialSolution> read_radial_solution_csv(const std::filesystem::path& path);

}  // namespace gradest
