#include "gradest/manifolds.hpp"

#include "gradest/errors.hpp"
#include "gradest/report_io.hpp"
#include "gradest/special.hpp"
#include "gradest/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace gradest {

namespace {

constexpr double pi = std::numbers::pi;

std::string describe(double r, double t)
{
    std::ostringstream out;
    out << "(r, t) = (" << r << ", " << t << ")";
    return out.str();
}

/// Index i with x[i] <= v <= x[i+1] (clamped) and the interpolation weight.
std::pair<std::size_t, double> bracket(const std::vector<double>& x, double v)
{
    if (v <= x.front()) {
        return {0, 0.0};
    }
    if (v >= x.back()) {
        return {x.size() - 2, 1.0};
    }
    auto it = std::upper_bound(x.begin(), x.end(), v);
    const auto i = static_cast<std::size_t>(it - x.begin()) - 1;
    return {i, (v - x[i]) / (x[i + 1] - x[i])};
}

}  // namespace

bool LogHeatData::contains(double r, double t) const
{
    const double slack = 1e-12;
    return r >= 0.0 && r <= r_max * (1.0 + slack) && t >= t_lo * (1.0 - slack)
           && t <= t_hi * (1.0 + slack);
}

LogHeatData euclidean_gaussian(int n)
{
    return euclidean_gaussian(n, DataWindow{8.0, 1e-2, 10.0});
}

LogHeatData euclidean_gaussian(int n, const DataWindow& window)
{
    if (n < 1) {
        fail(ErrorCode::InvalidParameter, "euclidean_gaussian needs n >= 1");
    }
    LogHeatData d;
    d.id = "euclidean(n=" + std::to_string(n) + ")";
    d.n = n;
    d.k = 0.0;
    d.kind = DataKind::Exact;
    d.r_max = window.r_max;
    d.t_lo = window.t_lo;
    d.t_hi = window.t_hi;
    const double nd = n;
    d.u = [nd](double r, double t) {
        return std::pow(4.0 * pi * t, -nd / 2.0) * std::exp(-r * r / (4.0 * t));
    };
    d.grad_sq = [](double r, double t) { return r * r / (4.0 * t * t); };
    d.f_t = [nd](double r, double t) { return -nd / (2.0 * t) + r * r / (4.0 * t * t); };
    d.laplacian = [nd](double, double t) { return -nd / (2.0 * t); };
    return d;
}

LogHeatData hyperbolic3_kernel()
{
    return hyperbolic3_kernel(DataWindow{});
}

LogHeatData hyperbolic3_kernel(const DataWindow& window)
{
    LogHeatData d;
    d.id = "h3";
    d.n = 3;
    d.k = 2.0;
    d.kind = DataKind::Exact;
    d.r_max = window.r_max;
    d.t_lo = window.t_lo;
    d.t_hi = window.t_hi;
    d.u = [](double r, double t) {
        return std::pow(4.0 * pi * t, -1.5)
               * std::exp(special::log_r_over_sinh(r) - t - r * r / (4.0 * t));
    };
    // f_r = 1/r - coth r - r/(2t)
    d.grad_sq = [](double r, double t) {
        const double fr = special::inv_minus_coth(r) - r / (2.0 * t);
        return fr * fr;
    };
    d.f_t = [](double r, double t) { return -1.5 / t - 1.0 + r * r / (4.0 * t * t); };
    d.laplacian = [](double r, double t) {
        // f_rr = 1/sinh^2 r - 1/r^2 - 1/(2t);  Delta f = f_rr + 2 coth(r) f_r
        const double frr = special::inv_sinh_sq_minus_inv_sq(r) - 0.5 / t;
        if (r == 0.0) {
            // coth(r) f_r -> -1/3 - 1/(2t)
            return frr + 2.0 * (-1.0 / 3.0 - 0.5 / t);
        }
        const double fr = special::inv_minus_coth(r) - r / (2.0 * t);
        return frr + 2.0 * special::coth(r) * fr;
    };
    return d;
}

void validate(const RadialSolverConfig& cfg)
{
    if (cfg.n < 2) {
        fail(ErrorCode::InvalidParameter, "radial solver needs n >= 2");
    }
    if (!(cfg.r_max > 0.0)) {
        fail(ErrorCode::InvalidParameter, "r_max must be positive");
    }
    if (cfg.n_r < 200) {
        fail(ErrorCode::InvalidParameter, "radial grid needs N_r >= 200");
    }
    if (!(cfg.t_start > 0.0 && cfg.t_start < cfg.t_end)) {
        fail(ErrorCode::InvalidParameter, "need 0 < t_start < t_end");
    }
    if (!(cfg.dt_initial > 0.0) || !(cfg.dt_growth >= 1.0) || !(cfg.dt_max >= cfg.dt_initial)) {
        fail(ErrorCode::InvalidParameter,
             "time step policy needs dt_initial > 0, growth >= 1, dt_max >= dt_initial");
    }
}

double hyperbolic_seed_profile(int n, double r, double t)
{
    const double nm1 = n - 1.0;
    return std::pow(4.0 * pi * t, -n / 2.0)
           * std::exp(0.5 * nm1 * special::log_r_over_sinh(r) - nm1 * nm1 * t / 4.0
                      - r * r / (4.0 * t));
}

RadialSolution::RadialSolution(int n, double k, std::vector<double> r, std::vector<double> t,
                               std::vector<std::vector<double>> u)
    : n_(n), k_(k), r_(std::move(r)), t_(std::move(t)), u_(std::move(u))
{
    if (r_.size() < 3 || t_.size() < 3 || u_.size() != t_.size()) {
        fail(ErrorCode::Parse, "radial solution needs >= 3 radii, >= 3 times, one slice per time");
    }
    for (const auto& row : u_) {
        if (row.size() != r_.size()) {
            fail(ErrorCode::Parse, "radial solution slice length does not match r grid");
        }
    }
    for (std::size_t i = 1; i < r_.size(); ++i) {
        if (!(r_[i] > r_[i - 1])) {
            fail(ErrorCode::Parse, "r grid must be strictly increasing");
        }
    }
    for (std::size_t j = 1; j < t_.size(); ++j) {
        if (!(t_[j] > t_[j - 1])) {
            fail(ErrorCode::Parse, "t list must be strictly increasing");
        }
    }
}

double RadialSolution::u(double r, double t) const
{
    const auto [i, wr] = bracket(r_, r);
    const auto [j, wt] = bracket(t_, t);
    const auto& lo = u_[j];
    const auto& hi = u_[j + 1];
    const double at_lo = (1 - wr) * lo[i] + wr * lo[i + 1];
    const double at_hi = (1 - wr) * hi[i] + wr * hi[i + 1];
    return (1 - wt) * at_lo + wt * at_hi;
}

RadialSolution::Derived RadialSolution::derived_at_node(std::size_t i, std::size_t j) const
{
    const auto& row = u_[j];
    const double dr_lo = i > 0 ? r_[i] - r_[i - 1] : r_[1] - r_[0];
    const double dr_hi = r_[i + 1] - r_[i];
    const double dr = 0.5 * (dr_lo + dr_hi);
    const double ui = row[i];
    double u_r = 0.0;
    double lap_u = 0.0;
    if (i == 0) {
        // Symmetry: u_{-1} = u_1; Delta u -> n u_rr at the pole.
        lap_u = n_ * 2.0 * (row[1] - row[0]) / (dr_hi * dr_hi);
    } else {
        u_r = (row[i + 1] - row[i - 1]) / (2.0 * dr);
        const double u_rr = (row[i + 1] - 2.0 * ui + row[i - 1]) / (dr * dr);
        lap_u = u_rr + (n_ - 1) * special::coth(r_[i]) * u_r;
    }
    const double h1 = t_[j] - t_[j - 1];
    const double h2 = t_[j + 1] - t_[j];
    const double u_t = -h2 / (h1 * (h1 + h2)) * u_[j - 1][i] + (h2 - h1) / (h1 * h2) * ui
                       + h1 / (h2 * (h1 + h2)) * u_[j + 1][i];
    Derived d;
    d.grad_sq = (u_r / ui) * (u_r / ui);
    d.f_t = u_t / ui;
    d.laplacian = lap_u / ui - d.grad_sq;
    return d;
}

RadialSolution::Derived RadialSolution::derived(double r, double t) const
{
    if (t < t_[1] || t > t_[t_.size() - 2] || r < 0.0 || r > r_[r_.size() - 2]) {
        fail(ErrorCode::OutsideWindow, "derived quantities undefined at " + describe(r, t));
    }
    auto [i, wr] = bracket(r_, r);
    if (i + 2 >= r_.size()) {
        i = r_.size() - 3;
        wr = 1.0;
    }
    auto [j, wt] = bracket(t_, t);
    if (j == 0) {
        j = 1;
        wt = 0.0;
    }
    if (j + 2 >= t_.size()) {
        j = t_.size() - 3;
        wt = 1.0;
    }
    const Derived a = derived_at_node(i, j);
    const Derived b = derived_at_node(i + 1, j);
    const Derived c = derived_at_node(i, j + 1);
    const Derived d = derived_at_node(i + 1, j + 1);
    auto mix = [&](double Derived::*field) {
        const double lo = (1 - wr) * a.*field + wr * b.*field;
        const double hi = (1 - wr) * c.*field + wr * d.*field;
        return (1 - wt) * lo + wt * hi;
    };
    return {mix(&Derived::grad_sq), mix(&Derived::f_t), mix(&Derived::laplacian)};
}

std::pair<double, double> RadialSolution::window_t() const
{
    const double r_edge = window_r_max();
    std::size_t j = 1;
    while (j + 2 < t_.size() && !(u(r_edge, t_[j]) > 1e-30)) {
        ++j;
    }
    return {t_[j], t_[t_.size() - 2]};
}

std::shared_ptr<const RadialSolution> radial_heat_solve(const RadialSolverConfig& cfg)
{
    validate(cfg);
    const int m = cfg.n_r;  // intervals; node m is the absorbing boundary
    const double dr = cfg.r_max / m;
    std::vector<double> r(m + 1);
    for (int i = 0; i <= m; ++i) {
        r[i] = dr * i;
    }

    // Spatial operator rows: L u_i = lo_i u_{i-1} + di_i u_i + up_i u_{i+1}.
    std::vector<double> op_lo(m, 0.0), op_di(m, 0.0), op_up(m, 0.0);
    op_di[0] = -2.0 * cfg.n / (dr * dr);
    op_up[0] = 2.0 * cfg.n / (dr * dr);
    for (int i = 1; i < m; ++i) {
        const double drift = (cfg.n - 1) * special::coth(r[i]) / (2.0 * dr);
        op_lo[i] = 1.0 / (dr * dr) - drift;
        op_di[i] = -2.0 / (dr * dr);
        op_up[i] = 1.0 / (dr * dr) + drift;
    }

    std::vector<double> current(m + 1);
    for (int i = 0; i <= m; ++i) {
        current[i] = hyperbolic_seed_profile(cfg.n, r[i], cfg.t_start);
    }
    current[m] = 0.0;

    std::vector<double> times{cfg.t_start};
    std::vector<std::vector<double>> slices{current};

    std::vector<double> lower(m), diag(m), upper(m), rhs(m), next(m);
    double t = cfg.t_start;
    double dt = cfg.dt_initial;
    int rejections = 0;
    while (t < cfg.t_end) {
        const double step = std::min(dt, cfg.t_end - t);
        for (int i = 0; i < m; ++i) {
            const double lu = op_di[i] * current[i] + op_up[i] * current[i + 1]
                              + (i > 0 ? op_lo[i] * current[i - 1] : 0.0);
            rhs[i] = current[i] + 0.5 * step * lu;
            lower[i] = -0.5 * step * op_lo[i];
            diag[i] = 1.0 - 0.5 * step * op_di[i];
            upper[i] = -0.5 * step * op_up[i];
        }
        upper[m - 1] = 0.0;  // u(r_max) = 0
        solve_tridiagonal(lower, diag, upper, rhs, next);

        const double peak = *std::max_element(next.begin(), next.end());
        const bool positive = std::all_of(next.begin(), next.end(),
                                          [peak](double v) { return v >= -1e-14 * peak; });
        if (!positive) {
            dt *= 0.5;
            if (++rejections > 60) {
                fail(ErrorCode::SolverFailure, "positivity could not be restored by halving dt");
            }
            continue;
        }
        std::copy(next.begin(), next.end(), current.begin());
        current[m] = 0.0;
        t = (step == cfg.t_end - t) ? cfg.t_end : t + step;
        times.push_back(t);
        slices.push_back(current);
        dt = std::min(dt * cfg.dt_growth, cfg.dt_max);
    }
    return std::make_shared<const RadialSolution>(cfg.n, cfg.n - 1.0, std::move(r),
                                                  std::move(times), std::move(slices));
}

LogHeatData numeric_log_heat_data(std::shared_ptr<const RadialSolution> solution)
{
    LogHeatData d;
    d.id = "radial(n=" + std::to_string(solution->n()) + ")";
    d.n = solution->n();
    d.k = solution->k();
    d.kind = DataKind::Numeric;
    d.r_max = solution->window_r_max();
    std::tie(d.t_lo, d.t_hi) = solution->window_t();
    d.u = [solution](double r, double t) { return solution->u(r, t); };
    d.grad_sq = [solution](double r, double t) { return solution->derived(r, t).grad_sq; };
    d.f_t = [solution](double r, double t) { return solution->derived(r, t).f_t; };
    d.laplacian = [solution](double r, double t) { return solution->derived(r, t).laplacian; };
    return d;
}

std::vector<double> heat_residual(const LogHeatData& data,
                                  std::span<const std::pair<double, double>> points)
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& [r, t] : points) {
        if (!data.contains(r, t)) {
            fail(ErrorCode::OutsideWindow, data.id + " has no data at " + describe(r, t));
        }
        out.push_back(data.laplacian(r, t) + data.grad_sq(r, t) - data.f_t(r, t));
    }
    return out;
}

void write_radial_solution_csv(const RadialSolution& solution, const std::filesystem::path& path)
{
    std::string out;
    out += "n," + std::to_string(solution.n()) + "\n";
    out += "k," + format_double(solution.k()) + "\n";
    out += "r";
    for (double v : solution.r()) {
        out += "," + format_double(v);
    }
    out += "\nt";
    for (double v : solution.t()) {
        out += "," + format_double(v);
    }
    out += "\n";
    for (std::size_t j = 0; j < solution.t().size(); ++j) {
        out += "u";
        for (double v : solution.slice(j)) {
            out += "," + format_double(v);
        }
        out += "\n";
    }
    write_file_atomic(path, out);
}

std::shared_ptr<const RadialSolution> read_radial_solution_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    auto parse_row = [&](const std::string& line, const std::string& key) {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        if (cell != key) {
            fail(ErrorCode::Parse, "expected row '" + key + "' in " + path.string());
        }
        std::vector<double> values;
        while (std::getline(ss, cell, ',')) {
            // strtod accepts subnormals, which std::stod rejects as out of range.
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                fail(ErrorCode::Parse, "bad number '" + cell + "' in row " + key);
            }
            values.push_back(v);
        }
        return values;
    };
    std::string line;
    auto next_line = [&](const std::string& key) {
        if (!std::getline(in, line)) {
            fail(ErrorCode::Parse, "missing row '" + key + "' in " + path.string());
        }
        return parse_row(line, key);
    };
    const auto n_row = next_line("n");
    const auto k_row = next_line("k");
    auto r = next_line("r");
    auto t = next_line("t");
    if (n_row.size() != 1 || k_row.size() != 1) {
        fail(ErrorCode::Parse, "header rows n and k take one value");
    }
    std::vector<std::vector<double>> u;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        u.push_back(parse_row(line, "u"));
    }
    return std::make_shared<const RadialSolution>(static_cast<int>(n_row[0]), k_row[0],
                                                  std::move(r), std::move(t), std::move(u));
}

}  // namespace gradest
