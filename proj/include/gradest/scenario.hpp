#pragma once

#include "gradest/conditions.hpp"
#include "gradest/context.hpp"
#include "gradest/families.hpp"
#include "gradest/manifolds.hpp"
#include "gradest/verifier.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gradest {

/// A family with its parameters, written "lyd:0.5" or "cor18-case2:0.5,0.1".
struct FamilySpec {
    Family family = Family::LYD;
    std::vector<double> params;
};

FamilySpec parse_family_spec(std::string_view text);
std::string to_string(const FamilySpec& spec);

/// Parameter names in order, e.g. {"beta", "gamma"}.
std::vector<std::string> family_parameter_names(Family family);

/// Coefficient input: a preset or a (t, b, bprime) table.
///   theta-power: theta;  lixu-sinh: none;  qian-from-a: a = "power:p" or "sinh2".
struct CoefficientSpec {
    std::string preset;
    std::optional<double> theta;
    std::string a = "power:2";
    std::filesystem::path table;
};

struct DataSpec {
    std::string kind = "h3";  // euclid | h3 | radial
    std::optional<std::filesystem::path> solution;
    RadialSolverConfig solver;
};

struct GridSettings {
    std::optional<double> t_min;
    std::optional<double> t_max;
    int points = 50;
};

struct Scenario {
    int version = 1;
    int n = 2;
    double k = 0.0;
    std::optional<double> T;
    std::vector<FamilySpec> bounds;
    std::optional<CoefficientSpec> coefficient;
    DataSpec data;
    GridSettings grid;
    Tolerance tolerance;
    std::optional<Suite> suite;
    std::optional<std::pair<double, double>> bracket;
    std::optional<std::filesystem::path> report;
    std::optional<std::filesystem::path> csv;

    EstimateContext context(double default_T) const { return {n, k, T.value_or(default_T)}; }
};

/// Strict: unknown keys, wrong types and a missing or unsupported version
/// are Parse errors.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

GradientBound build_bound(const EstimateContext& ctx, const FamilySpec& spec);

/// Qian's a(t) for the qian-from-a preset.
TimeFunction build_a(const CoefficientSpec& spec, double k);
/// b(t) for any coefficient spec; `T` bounds the running integral of qian-from-a.
TimeFunction build_b(const CoefficientSpec& spec, double k, double T);
std::string coefficient_label(const CoefficientSpec& spec);

/// Exact data for euclid/h3; for radial, loads `solution` or runs the solver.
LogHeatData build_data(const Scenario& scenario);

}  // namespace gradest
