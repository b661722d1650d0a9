#pragma once

#include "gradest/context.hpp"
#include "gradest/time_function.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gradest {

/// Hypothesis suites: Qian's (A1)-(A3), closed-manifold (B1)-(B5), complete
/// noncompact (B1')-(B5), and the coefficient conditions (C1)-(C4).
enum class Suite { A, B, Bprime, C };

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Suite suite);
std::string_view to_string(Verdict verdict);
std::optional<Suite> parse_suite(std::string_view text);

/// Labels in the order they are enumerated for the suite.
std::span<const std::string_view> suite_labels(Suite suite);

struct ConditionId {
    Suite suite = Suite::A;
    std::string label;
};

/// Throws InvalidParameter unless the label belongs to the suite.
ConditionId make_condition_id(Suite suite, std::string_view label);

struct ConditionVerdict {
    ConditionId id;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> witnesses;
    double measured = 0.0;
    std::string note;
};

struct ConditionReport {
    Suite suite = Suite::A;
    std::vector<ConditionVerdict> verdicts;
    std::vector<double> grid;
    double k = 0.0;
    double T = 0.0;
    std::optional<double> epsilon;
    std::optional<double> delta;

    bool passed() const;
    bool any_failed() const;
    const ConditionVerdict* find(std::string_view label) const;
};

/// Functions a suite reads: A needs a; B and B' need lambda, beta, psi; C needs b.
struct SuiteFunctions {
    std::optional<TimeFunction> a{};
    std::optional<TimeFunction> b{};
    std::optional<TimeFunction> lambda{};
    std::optional<TimeFunction> beta{};
    std::optional<TimeFunction> psi{};
};

/// epsilon for (B3'), delta for (C3). Absent values are scanned.
struct SuiteExtras {
    std::optional<double> epsilon;
    std::optional<double> delta;
};

struct CheckOptions {
    int grid_points = 200;
    /// Grid spans [grid_floor * T, T] log-uniformly; limits and integrability
    /// probe further down to T 2^-40.
    double grid_floor = 1e-4;
    double b5_tolerance = 1e-4;
};

ConditionReport check_suite(Suite suite, const SuiteFunctions& fns, const EstimateContext& ctx,
                            const SuiteExtras& extras = {}, const CheckOptions& options = {});

/// (C1) and (C2) only: the preconditions for generating (beta, psi) from b.
ConditionReport check_generation_hypotheses(const TimeFunction& b, const EstimateContext& ctx,
                                            const CheckOptions& options = {});

struct LimitEstimate {
    double estimate = 0.0;
    bool stable = false;
    /// Tail grows without bound (sign of growth in `estimate`, which is +-inf).
    bool divergent = false;
    std::vector<double> times;
    std::vector<double> values;
};

/// Samples f at T 2^-j, j = 10..40. Stable when the tail is Cauchy within 1e-6;
/// the estimate is then the Aitken-extrapolated limit.
LimitEstimate limit_at_zero(const TimeFunction& f, double T);

struct IntegrabilityResult {
    Verdict verdict = Verdict::Inconclusive;
    double exponent = 0.0;
    double witness = 0.0;
    std::string note;
};

/// Least-squares fit of log f against log t over [T 2^-40, T 2^-10]. Passes
/// when the fitted exponent exceeds -1 + 0.01 and the integral over (0, T)
/// converges; fails when the exponent is -1 or below (within 1e-3).
IntegrabilityResult integrability_at_zero(const TimeFunction& f, double T);

struct BoundednessResult {
    Verdict verdict = Verdict::Inconclusive;
    double supremum = 0.0;
    double witness = 0.0;
    double exponent = 0.0;
};

/// Grid supremum plus a growth-exponent fit toward zero. Fails only when f is
/// positive near zero with fitted exponent below -0.01.
BoundednessResult bounded_above(const std::function<double(double)>& f,
                                std::span<const double> grid, double T);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace gradest
