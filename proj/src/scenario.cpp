#include "gradest/scenario.hpp"

#include "gradest/coefficients.hpp"
#include "gradest/errors.hpp"
#include "gradest/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace gradest {

namespace {

using json = nlohmann::json;

double parse_number(std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        fail(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) {
        fail(ErrorCode::Parse, where + " must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) {
            fail(ErrorCode::Parse, "unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where)
{
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorCode::Parse, std::string("bad or missing '") + key + "' in " + where);
    }
}

FamilySpec family_from_json(const json& item)
{
    if (item.is_string()) {
        return parse_family_spec(item.get<std::string>());
    }
    require_keys(item, "bound", {"family", "params"});
    FamilySpec spec = parse_family_spec(get<std::string>(item, "family", "bound"));
    if (item.contains("params")) {
        spec.params = get<std::vector<double>>(item, "params", "bound");
    }
    return spec;
}

}  // namespace

std::vector<std::string> family_parameter_names(Family family)
{
    switch (family) {
    case Family::LYD:
    case Family::ImprovedLYD: return {"beta"};
    case Family::QianTheta: return {"theta"};
    case Family::Cor18Case1:
    case Family::Cor18Case2: return {"beta", "gamma"};
    case Family::Cor18Case3: return {"beta", "gamma", "theta"};
    default: return {};
    }
}

FamilySpec parse_family_spec(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const auto family = parse_family(name);
    if (!family || *family == Family::GeneratedFromB) {
        fail(ErrorCode::Parse, "unknown family '" + std::string(name) + "'");
    }
    FamilySpec spec{*family, {}};
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            spec.params.push_back(parse_number(rest.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
        }
    }
    return spec;
}

std::string to_string(const FamilySpec& spec)
{
    std::string out(family_name(spec.family));
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        out += (i == 0 ? ":" : ",") + format_double(spec.params[i]);
    }
    return out;
}

Scenario parse_scenario(const json& doc)
{
    require_keys(doc, "scenario", {"version", "n", "k", "T", "bounds", "coefficient", "data", "grid",
                                   "tolerance", "suite", "bracket", "outputs"});
    Scenario s;
    if (!doc.contains("version")) {
        fail(ErrorCode::Parse, "scenario needs a version field");
    }
    s.version = get<int>(doc, "version", "scenario");
    if (s.version != 1) {
        fail(ErrorCode::Parse, "unsupported scenario version " + std::to_string(s.version));
    }
    if (doc.contains("n")) s.n = get<int>(doc, "n", "scenario");
    if (doc.contains("k")) s.k = get<double>(doc, "k", "scenario");
    if (doc.contains("T")) s.T = get<double>(doc, "T", "scenario");
    if (doc.contains("bounds")) {
        if (!doc["bounds"].is_array()) {
            fail(ErrorCode::Parse, "bounds must be an array");
        }
        for (const auto& item : doc["bounds"]) {
            s.bounds.push_back(family_from_json(item));
        }
    }
    if (doc.contains("coefficient")) {
        const json& c = doc["coefficient"];
        require_keys(c, "coefficient", {"preset", "theta", "a", "table"});
        CoefficientSpec spec;
        if (c.contains("table")) {
            spec.preset = "table";
            spec.table = get<std::string>(c, "table", "coefficient");
        }
        if (c.contains("preset")) spec.preset = get<std::string>(c, "preset", "coefficient");
        if (c.contains("theta")) spec.theta = get<double>(c, "theta", "coefficient");
        if (c.contains("a")) spec.a = get<std::string>(c, "a", "coefficient");
        s.coefficient = spec;
    }
    if (doc.contains("data")) {
        const json& d = doc["data"];
        require_keys(d, "data", {"kind", "solution", "solver"});
        if (d.contains("kind")) s.data.kind = get<std::string>(d, "kind", "data");
        if (d.contains("solution")) s.data.solution = get<std::string>(d, "solution", "data");
        if (d.contains("solver")) {
            const json& c = d["solver"];
            const std::string where = "data.solver";
            require_keys(c, where, {"r_max", "n_r", "dt_initial", "dt_growth", "dt_max",
                                    "t_start", "t_end"});
            auto& cfg = s.data.solver;
            if (c.contains("r_max")) cfg.r_max = get<double>(c, "r_max", where);
            if (c.contains("n_r")) cfg.n_r = get<int>(c, "n_r", where);
            if (c.contains("dt_initial")) cfg.dt_initial = get<double>(c, "dt_initial", where);
            if (c.contains("dt_growth")) cfg.dt_growth = get<double>(c, "dt_growth", where);
            if (c.contains("dt_max")) cfg.dt_max = get<double>(c, "dt_max", where);
            if (c.contains("t_start")) cfg.t_start = get<double>(c, "t_start", where);
            if (c.contains("t_end")) cfg.t_end = get<double>(c, "t_end", where);
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        require_keys(g, "grid", {"t_min", "t_max", "points"});
        if (g.contains("t_min")) s.grid.t_min = get<double>(g, "t_min", "grid");
        if (g.contains("t_max")) s.grid.t_max = get<double>(g, "t_max", "grid");
        if (g.contains("points")) s.grid.points = get<int>(g, "points", "grid");
    }
    if (doc.contains("tolerance")) {
        const json& t = doc["tolerance"];
        require_keys(t, "tolerance", {"absolute", "relative"});
        if (t.contains("absolute")) s.tolerance.absolute = get<double>(t, "absolute", "tolerance");
        if (t.contains("relative")) s.tolerance.relative = get<double>(t, "relative", "tolerance");
    }
    if (doc.contains("suite")) {
        s.suite = parse_suite(get<std::string>(doc, "suite", "scenario"));
        if (!s.suite) {
            fail(ErrorCode::Parse, "unknown suite");
        }
    }
    if (doc.contains("bracket")) {
        const auto b = get<std::vector<double>>(doc, "bracket", "scenario");
        if (b.size() != 2) {
            fail(ErrorCode::Parse, "bracket takes two numbers");
        }
        s.bracket = std::pair{b[0], b[1]};
    }
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        require_keys(o, "outputs", {"report", "csv"});
        if (o.contains("report")) s.report = get<std::string>(o, "report", "outputs");
        if (o.contains("csv")) s.csv = get<std::string>(o, "csv", "outputs");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, path.string() + ": " + e.what());
    }
    Scenario s = parse_scenario(doc);
    auto resolve = [&](std::filesystem::path& p) {
        if (p.is_relative()) {
            p = path.parent_path() / p;
        }
    };
    if (s.coefficient && s.coefficient->preset == "table") {
        resolve(s.coefficient->table);
        if (!std::filesystem::exists(s.coefficient->table)) {
            fail(ErrorCode::Io, "coefficient table " + s.coefficient->table.string() + " not found");
        }
    }
    if (s.data.solution) {
        resolve(*s.data.solution);
        if (!std::filesystem::exists(*s.data.solution)) {
            fail(ErrorCode::Io, "solution file " + s.data.solution->string() + " not found");
        }
    }
    return s;
}

GradientBound build_bound(const EstimateContext& ctx, const FamilySpec& spec)
{
    return make_family(ctx, spec.family, spec.params);
}

TimeFunction build_a(const CoefficientSpec& spec, double k)
{
    if (spec.a == "sinh2") {
        return sinh_sq_a(k);
    }
    if (spec.a.rfind("power:", 0) == 0) {
        return power_a(parse_number(std::string_view(spec.a).substr(6)));
    }
    fail(ErrorCode::Parse, "a must be 'power:p' or 'sinh2', got '" + spec.a + "'");
}

TimeFunction build_b(const CoefficientSpec& spec, double k, double T)
{
    if (spec.preset == "theta-power") {
        if (!spec.theta) {
            fail(ErrorCode::Parse, "theta-power needs theta");
        }
        return theta_power_b(*spec.theta, k);
    }
    if (spec.preset == "lixu-sinh") {
        return lixu_sinh_b(k);
    }
    if (spec.preset == "qian-from-a") {
        return qian_to_b(build_a(spec, k), k, T);
    }
    if (spec.preset == "table") {
        return table_b(read_coefficient_table(spec.table), spec.table.filename().string());
    }
    fail(ErrorCode::Parse, "unknown coefficient preset '" + spec.preset + "'");
}

std::string coefficient_label(const CoefficientSpec& spec)
{
    if (spec.preset == "theta-power") {
        return "theta-power(" + format_double(spec.theta.value_or(0.0)) + ")";
    }
    if (spec.preset == "qian-from-a") {
        return "qian-from-a(" + spec.a + ")";
    }
    if (spec.preset == "table") {
        return "table(" + spec.table.filename().string() + ")";
    }
    return spec.preset;
}

LogHeatData build_data(const Scenario& scenario)
{
    const std::string& kind = scenario.data.kind;
    if (kind == "euclid") {
        return euclidean_gaussian(scenario.n);
    }
    if (kind == "h3") {
        return hyperbolic3_kernel();
    }
    if (kind == "radial") {
        if (scenario.data.solution) {
            return numeric_log_heat_data(read_radial_solution_csv(*scenario.data.solution));
        }
        RadialSolverConfig cfg = scenario.data.solver;
        cfg.n = scenario.n;
        return numeric_log_heat_data(radial_heat_solve(cfg));
    }
    fail(ErrorCode::Parse, "data kind must be euclid, h3 or radial, got '" + kind + "'");
}

}  // namespace gradest
