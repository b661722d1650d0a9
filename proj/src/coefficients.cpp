#include "gradest/coefficients.hpp"

#include "gradest/conditions.hpp"
#include "gradest/errors.hpp"
#include "gradest/special.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace gradest {

namespace {

void require_positive_k(double k, const char* what)
{
    if (!(k > 0.0)) {
        fail(ErrorCode::KZeroUnsupported, std::string(what) + " requires k > 0");
    }
}

double b_prime_at(const TimeFunction& b, double s, double T)
{
    return differentiate(b, s, T).value;
}

/// Shared running integrals behind a generated (beta, psi) pair.
class Generator {
public:
    Generator(const EstimateContext& ctx, TimeFunction b, const QuadratureSpec& spec)
        : ctx_(ctx),
          b_(std::move(b)),
          weighted_(
              [this](double s) { return b_(s) * std::exp(2.0 * ctx_.k * s); }, ctx.T, spec),
          psi_integral_([this](double s) { return psi_integrand(s); }, ctx.T, spec)
    {
    }

    Generator(const Generator&) = delete;
    Generator& operator=(const Generator&) = delete;

    double beta(double t) const
    {
        const double bt = b_(t);
        if (!(bt > 0.0)) {
            if (bt == 0.0 && t < 1e-6 * ctx_.T) {
                return 1.0;  // b underflowed; beta -> 1 as t -> 0
            }
            std::ostringstream msg;
            msg << "b(" << t << ") = " << bt << " is not positive";
            fail(ErrorCode::InvalidParameter, msg.str());
        }
        const double k = ctx_.k;
        return 1.0 - 2.0 * k * weighted_(t) / (bt * std::exp(2.0 * k * t));
    }

    double psi(double t) const
    {
        const double bt = b_(t);
        if (!(bt > 0.0)) {
            std::ostringstream msg;
            msg << "b(" << t << ") = " << bt << " is not positive";
            fail(ErrorCode::InvalidParameter, msg.str());
        }
        return ctx_.n / (8.0 * bt) * psi_integral_(t);
    }

private:
    double psi_integrand(double s) const
    {
        const double bs = b_(s);
        if (bs == 0.0 && s < 1e-6 * ctx_.T) {
            return 0.0;
        }
        const double bp = b_prime_at(b_, s, ctx_.T);
        return bp * bp / (bs * beta(s));
    }

    EstimateContext ctx_;
    TimeFunction b_;
    CumulativeIntegral weighted_;
    CumulativeIntegral psi_integral_;
};

// Cubic Hermite interpolant with power-law continuation below the first node.
class HermiteTable {
public:
    explicit HermiteTable(std::vector<CoefficientRow> rows) : rows_(std::move(rows))
    {
        if (rows_.size() < 2) {
            fail(ErrorCode::Parse, "coefficient table needs at least two rows");
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const auto& r = rows_[i];
            if (!std::isfinite(r.t) || !std::isfinite(r.b) || !std::isfinite(r.bprime)) {
                fail(ErrorCode::Parse, "non-finite entry in coefficient table");
            }
            if (i > 0 && !(r.t > rows_[i - 1].t)) {
                fail(ErrorCode::Parse, "coefficient table times must be strictly increasing");
            }
        }
        const auto& first = rows_.front();
        if (!(first.t > 0.0) || !(first.b > 0.0)) {
            fail(ErrorCode::Parse, "coefficient table must start at t > 0 with b > 0");
        }
        exponent_ = first.t * first.bprime / first.b;
    }

    double value(double t) const { return eval(t, false); }
    double derivative(double t) const { return eval(t, true); }
    double exponent() const { return exponent_; }

private:
    double eval(double t, bool deriv) const
    {
        const auto& first = rows_.front();
        if (t < first.t) {
            const double scale = std::pow(t / first.t, exponent_);
            return deriv ? first.b * exponent_ * scale / t : first.b * scale;
        }
        const auto& last = rows_.back();
        if (t > last.t * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "t = " << t << " beyond last table node " << last.t;
            fail(ErrorCode::OutOfDomain, msg.str());
        }
        auto it = std::upper_bound(rows_.begin(), rows_.end(), t,
                                   [](double x, const CoefficientRow& r) { return x < r.t; });
        if (it == rows_.end()) {
            --it;
        }
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double h = hi.t - lo.t;
        const double s = (t - lo.t) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        if (!deriv) {
            return (2 * s3 - 3 * s2 + 1) * lo.b + (s3 - 2 * s2 + s) * h * lo.bprime
                   + (-2 * s3 + 3 * s2) * hi.b + (s3 - s2) * h * hi.bprime;
        }
        return ((6 * s2 - 6 * s) * lo.b + (-6 * s2 + 6 * s) * hi.b) / h
               + (3 * s2 - 4 * s + 1) * lo.bprime + (3 * s2 - 2 * s) * hi.bprime;
    }

    std::vector<CoefficientRow> rows_;
    double exponent_ = 1.0;
};

}  // namespace

TimeFunction theta_power_b(double theta, double k)
{
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        fail(ErrorCode::InvalidParameter, "theta must be positive");
    }
    const double q = 2.0 / theta - 1.0;
    TimeFunction b = make_time_function(
        [=](double t) { return (1.0 + theta * k * t) * std::pow(t, q); },
        [=](double t) {
            return theta * k * std::pow(t, q) + (1.0 + theta * k * t) * q * std::pow(t, q - 1.0);
        },
        "theta-power");
    b.power_hint = q;
    if (q > 0.0) {
        b.zero_limit_hint = 0.0;
    }
    return b;
}

TimeFunction lixu_sinh_b(double k)
{
    TimeFunction b = make_time_function(
        [k](double t) {
            const double x = k * t;
            const double s = std::sinh(x);
            // sinh x cosh x - x = (sinh 2x - 2x)/2
            return s * s + 0.5 * special::sinh_minus_identity(2.0 * x);
        },
        [k](double t) {
            const double x = k * t;
            const double s = std::sinh(x);
            return k * (std::sinh(2.0 * x) + 2.0 * s * s);
        },
        "lixu-sinh");
    b.power_hint = 2.0;
    b.zero_limit_hint = 0.0;
    return b;
}

TimeFunction power_a(double p)
{
    TimeFunction a = make_time_function([p](double t) { return std::pow(t, p); },
                                        [p](double t) { return p * std::pow(t, p - 1.0); },
                                        "power");
    a.power_hint = p;
    if (p > 0.0) {
        a.zero_limit_hint = 0.0;
    }
    return a;
}

TimeFunction sinh_sq_a(double k)
{
    TimeFunction a = make_time_function(
        [k](double t) {
            const double s = std::sinh(k * t);
            return s * s;
        },
        [k](double t) { return k * std::sinh(2.0 * k * t); }, "sinh-sq");
    a.power_hint = 2.0;
    a.zero_limit_hint = 0.0;
    return a;
}

TimeFunction qian_to_b(const TimeFunction& a, double k, double T, const QuadratureSpec& spec)
{
    auto integral = std::make_shared<CumulativeIntegral>(a.value, T, spec);
    TimeFunction b;
    b.label = "qian(" + a.label + ")";
    b.value = [a, k, integral](double t) { return a(t) + 2.0 * k * (*integral)(t); };
    if (a.derivative) {
        b.derivative = [a, k](double t) { return (*a.derivative)(t) + 2.0 * k * a(t); };
    }
    b.power_hint = a.power_hint;
    b.zero_limit_hint = a.zero_limit_hint;
    return b;
}

TimeFunction table_b(std::vector<CoefficientRow> rows, std::string label)
{
    auto table = std::make_shared<const HermiteTable>(std::move(rows));
    TimeFunction b = make_time_function([table](double t) { return table->value(t); },
                                        [table](double t) { return table->derivative(t); },
                                        std::move(label));
    b.power_hint = table->exponent();
    if (table->exponent() > 0.0) {
        b.zero_limit_hint = 0.0;
    }
    return b;
}

std::vector<CoefficientRow> read_coefficient_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open coefficient table " + path.string());
    }
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t\r");
            const auto e = cell.find_last_not_of(" \t\r");
            cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
        }
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorCode::Parse, "empty coefficient table " + path.string());
    }
    const auto header = split(line);
    int col_t = -1, col_b = -1, col_bp = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "t") col_t = static_cast<int>(i);
        if (header[i] == "b") col_b = static_cast<int>(i);
        if (header[i] == "bprime") col_bp = static_cast<int>(i);
    }
    if (col_t < 0 || col_b < 0 || col_bp < 0) {
        fail(ErrorCode::Parse, "coefficient table needs columns t, b, bprime");
    }
    const auto width = static_cast<std::size_t>(std::max({col_t, col_b, col_bp}));
    std::vector<CoefficientRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() <= width) {
            fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": missing columns");
        }
        try {
            rows.push_back({std::stod(cells[col_t]), std::stod(cells[col_b]),
                            std::stod(cells[col_bp])});
        } catch (const std::exception&) {
            fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad number");
        }
    }
    return rows;
}

std::pair<TimeFunction, TimeFunction> generate_from_b(const EstimateContext& ctx,
                                                      const TimeFunction& b,
                                                      const QuadratureSpec& spec)
{
    validate(ctx);
    validate(spec);
    require_positive_k(ctx.k, "generation from b");
    auto gen = std::make_shared<const Generator>(ctx, b, spec);
    TimeFunction beta =
        make_time_function([gen](double t) { return gen->beta(t); }, "beta[" + b.label + "]");
    beta.zero_limit_hint = 1.0;
    TimeFunction psi =
        make_time_function([gen](double t) { return gen->psi(t); }, "psi[" + b.label + "]");
    psi.power_hint = -1.0;
    return {std::move(beta), std::move(psi)};
}

TimeFunction beta_from_b(const EstimateContext& ctx, const TimeFunction& b,
                         const QuadratureSpec& spec)
{
    return generate_from_b(ctx, b, spec).first;
}

TimeFunction psi_from_b(const EstimateContext& ctx, const TimeFunction& b,
                        const QuadratureSpec& spec)
{
    return generate_from_b(ctx, b, spec).second;
}

GradientBound bound_from_b(const EstimateContext& ctx, const TimeFunction& b, std::string source,
                           std::vector<double> source_params, const QuadratureSpec& spec)
{
    const ConditionReport pre = check_generation_hypotheses(b, ctx);
    for (const auto& v : pre.verdicts) {
        if (v.verdict == Verdict::Fail) {
            std::ostringstream msg;
            msg << "coefficient " << source << " fails (" << v.id.label << "): " << v.note;
            fail(ErrorCode::ConditionFailure, msg.str());
        }
    }
    auto [beta, psi] = generate_from_b(ctx, b, spec);
    GeneratedProfile profile{std::move(beta), std::move(psi), std::move(source),
                             std::move(source_params)};
    return make_generated_bound(ctx, std::move(profile));
}

double logderiv_identity_residual(const EstimateContext& ctx, const TimeFunction& b,
                                  const TimeFunction& beta, double t)
{
    const double be = beta(t);
    if (be == 1.0) {
        fail(ErrorCode::InvalidParameter, "beta = 1: identity undefined");
    }
    const double beta_prime = differentiate(beta, t, ctx.T).value;
    const double b_log_prime = differentiate(b, t, ctx.T).value / b(t);
    return (2.0 * ctx.k * be + beta_prime) / (1.0 - be) - b_log_prime;
}

B5Residual b5_residual(const EstimateContext& ctx, const TimeFunction& beta,
                       const TimeFunction& psi, double t)
{
    const double be = beta(t);
    if (!(be > 0.0 && be < 1.0)) {
        std::ostringstream msg;
        msg << "beta(" << t << ") = " << be << " outside (0,1)";
        fail(ErrorCode::InvalidParameter, msg.str());
    }
    const auto dbeta = differentiate(beta, t, ctx.T);
    const auto dpsi = differentiate(psi, t, ctx.T);
    const double drive = 2.0 * ctx.k * be + dbeta.value;
    const double coeff = drive / (1.0 - be);
    B5Residual out;
    out.psi_prime = dpsi.value;
    out.residual = dpsi.value + coeff * psi(t)
                   - ctx.n * drive * drive / (8.0 * be * (1.0 - be) * (1.0 - be));
    out.lower_accuracy = dbeta.lower_accuracy || dpsi.lower_accuracy;
    return out;
}

}  // namespace gradest
