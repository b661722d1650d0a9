#include "gradest/reports.hpp"

#include "gradest/report_io.hpp"

#include <cmath>

namespace gradest {

namespace {

using json = nlohmann::ordered_json;

json number(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return format_double(x);
}

json numbers(const std::vector<double>& xs)
{
    json out = json::array();
    for (double x : xs) {
        out.push_back(number(x));
    }
    return out;
}

std::string row(std::initializer_list<double> values)
{
    std::string out;
    for (double v : values) {
        if (!out.empty()) {
            out += ',';
        }
        out += format_double(v);
    }
    return out + '\n';
}

}  // namespace

json to_json(const GradientBound& bound)
{
    json out;
    out["family"] = std::string(family_name(bound.family()));
    out["params"] = numbers(bound.params());
    out["n"] = bound.ctx().n;
    out["k"] = number(bound.ctx().k);
    out["T"] = number(bound.ctx().T);
    if (const auto* profile = bound.profile()) {
        out["source"] = profile->source;
        out["source_params"] = numbers(profile->source_params);
    }
    return out;
}

json to_json(const ConditionReport& report)
{
    json out;
    out["suite"] = std::string(to_string(report.suite));
    out["passed"] = report.passed();
    out["k"] = number(report.k);
    out["T"] = number(report.T);
    out["epsilon"] = report.epsilon ? number(*report.epsilon) : json(nullptr);
    out["delta"] = report.delta ? number(*report.delta) : json(nullptr);
    out["grid_points"] = report.grid.size();
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        json item;
        item["condition"] = std::string(v.id.label);
        item["verdict"] = std::string(to_string(v.verdict));
        item["measured"] = number(v.measured);
        item["witnesses"] = numbers(v.witnesses);
        item["note"] = v.note;
        verdicts.push_back(std::move(item));
    }
    out["conditions"] = std::move(verdicts);
    return out;
}

json to_json(const VerificationReport& report)
{
    json out;
    out["bound"] = report.bound_id;
    out["data"] = report.data_id;
    out["data_kind"] = report.data_kind == DataKind::Exact ? "exact" : "numeric";
    out["passed"] = report.passed();
    out["max_G"] = number(report.max_G);
    out["argmax"] = {{"r", number(report.argmax.first)}, {"t", number(report.argmax.second)}};
    out["tolerance"] = {{"absolute", number(report.tolerance.absolute)},
                        {"relative", number(report.tolerance.relative)}};
    out["grid"] = {{"r", numbers(report.grid.r)}, {"t", numbers(report.grid.t)}};
    json violations = json::array();
    for (const auto& p : report.violations) {
        violations.push_back({{"r", number(p.r)}, {"t", number(p.t)}, {"G", number(p.G)}});
    }
    out["violations"] = std::move(violations);
    out["margin_curve"] = numbers(report.margin_curve);
    return out;
}

json to_json(const AsymptoticLimits& limits)
{
    json out;
    out["alpha_inf"] = limits.alpha_inf ? number(*limits.alpha_inf) : json("divergent");
    out["phi_inf"] = limits.phi_inf ? number(*limits.phi_inf) : json("divergent");
    out["t"] = numbers(limits.t);
    out["alpha"] = numbers(limits.alpha);
    out["phi"] = numbers(limits.phi);
    return out;
}

std::string samples_csv(const std::vector<BoundSample>& samples)
{
    std::string out = "t,beta,psi,alpha,phi\n";
    for (const auto& s : samples) {
        out += row({s.t, s.beta, s.psi, s.alpha, s.phi});
    }
    return out;
}

std::string verification_csv(const VerificationReport& report)
{
    std::string out = "r,t,G\n";
    for (const auto& p : report.samples) {
        out += row({p.r, p.t, p.G});
    }
    return out;
}

std::string margin_csv(const VerificationReport& report)
{
    std::string out = "t,margin,center_margin\n";
    for (std::size_t j = 0; j < report.grid.t.size(); ++j) {
        out += row({report.grid.t[j], report.margin_curve[j], report.center_margin[j]});
    }
    return out;
}

std::string comparison_csv(const ComparisonTable& table)
{
    std::string out = "t";
    for (const auto& id : table.ids) {
        out += ",\"" + id + "\"";
    }
    out += ",dominant\n";
    for (std::size_t j = 0; j < table.t.size(); ++j) {
        out += format_double(table.t[j]);
        for (const auto& v : table.psi[j]) {
            out += ',';
            if (v) {
                out += format_double(*v);
            }
        }
        out += ',';
        if (table.dominant[j]) {
            out += "\"" + table.ids[*table.dominant[j]] + "\"";
        }
        out += '\n';
    }
    return out;
}

}  // namespace gradest
