#include "gradest/errors.hpp"
#include "gradest/report_io.hpp"
#include "gradest/reports.hpp"
#include "gradest/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

using namespace gradest;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a gradest::Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("shortest round-trip formatting")
{
    for (double x : {0.1, 1.0 / 3.0, 1.03125, 1e-300, 6.02214076e23, -2.5}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("atomic writes")
{
    const auto path = std::filesystem::temp_directory_path() / "gradest_atomic_test.txt";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    CHECK(read_file(path) == "second");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    CHECK(code_of([] { read_file("/nonexistent/gradest"); }) == ErrorCode::Io);
}

TEST_CASE("family specs")
{
    const auto s = parse_family_spec("cor18-case2:0.5,0.1");
    CHECK(s.family == Family::Cor18Case2);
    CHECK(s.params == std::vector<double>{0.5, 0.1});
    CHECK(to_string(s) == "cor18-case2:0.5,0.1");
    CHECK(parse_family_spec("hamilton").params.empty());
    CHECK(code_of([] { parse_family_spec("nope:1"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_family_spec("lyd:0.5x"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_family_spec("generated-from-b"); }) == ErrorCode::Parse);
    CHECK(family_parameter_names(Family::Cor18Case3)
          == std::vector<std::string>{"beta", "gamma", "theta"});
}

TEST_CASE("scenario parsing is strict")
{
    const json good = {
        {"version", 1},
        {"n", 3},
        {"k", 2.0},
        {"T", 5.0},
        {"bounds", {"lyd:0.5", {{"family", "qian-theta"}, {"params", {0.5}}}}},
        {"data", {{"kind", "h3"}}},
        {"grid", {{"points", 12}}},
        {"tolerance", {{"absolute", 1e-10}}},
        {"suite", "C"},
        {"bracket", {1.001, 3.0}},
        {"coefficient", {{"preset", "theta-power"}, {"theta", 0.5}}},
    };
    const Scenario s = parse_scenario(good);
    CHECK(s.n == 3);
    CHECK(s.T == 5.0);
    REQUIRE(s.bounds.size() == 2);
    CHECK(s.bounds[1].family == Family::QianTheta);
    CHECK(s.grid.points == 12);
    CHECK(s.tolerance.absolute == 1e-10);
    CHECK(s.suite == Suite::C);
    CHECK(s.bracket->second == 3.0);
    CHECK(coefficient_label(*s.coefficient) == "theta-power(0.5)");
    CHECK(build_bound(s.context(1.0), s.bounds[0]).id() == "lyd(0.5)");

    json typo = good;
    typo["thetta"] = 0.5;
    CHECK(code_of([&] { parse_scenario(typo); }) == ErrorCode::Parse);
    json nested = good;
    nested["grid"]["step"] = 0.1;
    CHECK(code_of([&] { parse_scenario(nested); }) == ErrorCode::Parse);
    json unversioned = good;
    unversioned.erase("version");
    CHECK(code_of([&] { parse_scenario(unversioned); }) == ErrorCode::Parse);
    json future = good;
    future["version"] = 2;
    CHECK(code_of([&] { parse_scenario(future); }) == ErrorCode::Parse);
    json wrong_type = good;
    wrong_type["n"] = "three";
    CHECK(code_of([&] { parse_scenario(wrong_type); }) == ErrorCode::Parse);

    const auto dir = std::filesystem::temp_directory_path() / "gradest_scenario_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "s.json", R"({"version": 1, "coefficient": {"table": "missing.csv"}})");
    CHECK(code_of([&] { load_scenario(dir / "s.json"); }) == ErrorCode::Io);
    write_file_atomic(dir / "broken.json", "{");
    CHECK(code_of([&] { load_scenario(dir / "broken.json"); }) == ErrorCode::Parse);
}

TEST_CASE("report serialisation")
{
    const EstimateContext ctx{3, 2.0, 5.0};
    const auto bound = make_family(ctx, Family::LYD, {0.5});
    const auto j = to_json(bound);
    CHECK(j["family"] == "lyd");
    CHECK(j["params"][0] == 0.5);
    CHECK(j["n"] == 3);

    GridSpec grid{{0.0, 1.0}, {0.5, 1.0}};
    const auto rep = verify_bound(bound, hyperbolic3_kernel(), grid);
    const auto rj = to_json(rep);
    CHECK(rj["passed"] == true);
    CHECK(rj["margin_curve"].size() == 2);
    const std::string csv = verification_csv(rep);
    CHECK(csv.rfind("r,t,G\n0,0.5,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(margin_csv(rep).rfind("t,margin,center_margin\n", 0) == 0);

    const auto table = compare_bounds({bound, make_family(ctx, Family::ImprovedLYD, {0.5})}, {0.4, 2.0});
    CHECK(comparison_csv(table)
          == "t,\"lyd(0.5)\",\"improved-lyd(0.5)\",dominant\n0.4,"
                 + format_double(bound.evaluate(0.4).psi) + ",,\"lyd(0.5)\"\n2,"
                 + format_double(bound.evaluate(2.0).psi) + ","
                 + format_double(table.psi[1][1].value()) + ",\"improved-lyd(0.5)\"\n");

    const auto lim = to_json(asymptotic_limits(make_family(ctx, Family::LiXuLinear)));
    CHECK(lim["alpha_inf"] == "divergent");
}
