#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mvtlab/cli.hpp"

using mvtlab::cli::Json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = mvtlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("mvtlab_" + name);
    std::ofstream(path) << content;
    return path;
}

std::vector<Json> lines(const std::string& text) {
    std::vector<Json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(Json::parse(line));
    }
    return out;
}

const std::string kFixture = std::string(MVTLAB_FIXTURE_DIR) + "/condition_examples.ndjson";

} // namespace

TEST_CASE("solve_flett_report") {
    const Outcome o = run({"solve", "flett", "--fn", "x^3+2*x-1", "-a", "-2", "-b", "2"});
    CHECK(o.code == 0);
    const Json j = o.json();
    CHECK(j["request"]["theorem"] == "flett");
    CHECK(j["request"]["interval"]["a"] == -2.0);
    REQUIRE(j["results"].size() == 1);
    const Json& r = j["results"][0];
    CHECK(r["hypothesis_satisfied"] == true);
    CHECK(r["degenerate"] == false);
    REQUIRE(r["points"].size() == 1);
    CHECK(r["points"][0]["xi"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r["points"][0]["verified"] == true);
    CHECK(j.contains("meta"));
}

TEST_CASE("solve_pawlikowska_and_expression_endpoints") {
    const Outcome o = run({"solve", "pawlikowska", "--fn", "x^4-2*x^2", "-a", "-1", "-b", "1", "--n", "2"});
    CHECK(o.code == 0);
    const Json j = o.json();
    CHECK(j["request"]["n"] == 2);
    CHECK(j["results"][0]["points"][0]["xi"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-8));

    const Outcome s = run({"solve", "rolle", "--fn", "sin(x)", "-a", "0", "-b", "pi", "--stable"});
    CHECK(s.code == 0);
    CHECK(s.json()["results"][0]["points"][0]["xi"].get<double>() ==
          doctest::Approx(1.5707963267948966).epsilon(1e-10));
}

TEST_CASE("stable_output_is_byte_identical") {
    const std::vector<std::string> args{"solve", "cauchy-flett", "--fn", "exp(x)*sin(3*x)", "--gn", "exp(x)",
                                        "-a", "-1", "-b", "1.5", "--stable"};
    const Outcome first = run(args);
    const Outcome second = run(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK_FALSE(first.json().contains("meta"));
}

TEST_CASE("parse_error_exit_code") {
    const Outcome o = run({"solve", "flett", "--fn", "x^^2", "-a", "0", "-b", "1"});
    CHECK(o.code == mvtlab::cli::exit_usage);
    CHECK_FALSE(o.err.empty());
    const Json j = o.json();
    CHECK(j["error"]["kind"] == "parse");
    CHECK(j["request"]["error_offset"] == 2);
}

TEST_CASE("usage_errors") {
    CHECK(run({}).code == mvtlab::cli::exit_usage);
    CHECK(run({"solve", "no-such-theorem", "--fn", "x", "-a", "0", "-b", "1"}).code == mvtlab::cli::exit_usage);
    CHECK(run({"solve", "flett", "--fn", "x^2", "-a", "0", "-b", "1", "--json", "--csv"}).code ==
          mvtlab::cli::exit_usage);
    CHECK(run({"solve", "cauchy", "--fn", "x^2", "-a", "0", "-b", "1"}).code == mvtlab::cli::exit_usage);
    CHECK(run({"solve", "flett", "--fn", "x^2", "-a", "x", "-b", "1"}).code == mvtlab::cli::exit_usage);
    CHECK(run({"solve", "flett", "--fn", "x^2", "-a", "1", "-b", "0"}).code == mvtlab::cli::exit_usage);
    CHECK(run({"solve", "flett", "--fn", "x^2", "-a", "0", "-b", "1", "--scan-points", "1"}).code ==
          mvtlab::cli::exit_usage);
}

TEST_CASE("numeric_and_hypothesis_exit_codes") {
    // 1/x on [-1, 1]: the Lagrange quotient is finite but no point exists
    const Outcome domain = run({"solve", "integral-mvt", "--fn", "1/x", "-a", "-1", "-b", "1"});
    CHECK(domain.code == mvtlab::cli::exit_numeric);
    CHECK(domain.json().contains("error"));

    // nonzero mean violates the hypothesis of thm-4.9
    const Outcome hyp = run({"solve", "thm-4.9", "--fn", "x", "--gn", "exp(x)", "-a", "0", "-b", "1"});
    CHECK(hyp.code == mvtlab::cli::exit_hypothesis);
    CHECK(hyp.json()["error"]["kind"] == "hypothesis");

    // x^3 on [-1/2, 1] satisfies no Rolle-type equality, yet a Flett point exists
    const Outcome unsat = run({"solve", "flett", "--fn", "x^3", "-a", "-0.5", "-b", "1", "--stable"});
    CHECK(unsat.code == 0);
    CHECK(unsat.json()["results"][0]["hypothesis_satisfied"] == false);

    const Outcome none = run({"solve", "flett", "--fn", "exp(x)", "-a", "0", "-b", "1", "--stable"});
    CHECK(none.code == mvtlab::cli::exit_hypothesis);
    const Json r = none.json()["results"][0];
    CHECK(r["points"].empty());
    CHECK(r.contains("closest"));
}

TEST_CASE("csv_output") {
    const Outcome o = run({"solve", "flett", "--fn", "x^3+2*x-1", "-a", "-2", "-b", "2", "--csv"});
    CHECK(o.code == 0);
    CHECK(o.out == "theorem,xi,residual,verified,degenerate,hypothesis_satisfied\nflett,1,0,true,false,true\n");

    const Outcome c = run({"classify", "--fn", "asin(x)", "-a", "-1", "-b", "1", "--csv"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("flett,trahan,tong,malesevic_t1,malesevic_m1,has_flett_point,M,I\n", 0) == 0);
    CHECK(c.out.find("NotApplicable,NotApplicable,Satisfied,") != std::string::npos);
}

TEST_CASE("classify_report") {
    const Outcome o = run({"classify", "--fn", "x^3", "-a", "-0.5", "-b", "1", "--stable"});
    CHECK(o.code == 0);
    const Json v = o.json()["condition_vector"];
    CHECK(v["flett"] == "NotSatisfied");
    CHECK(v["trahan"] == "Satisfied");
    CHECK(v["has_flett_point"] == true);
    CHECK(v["M"].get<double>() == doctest::Approx(0.4375));
    CHECK(v["I"].get<double>() == doctest::Approx(0.15625));
}

TEST_CASE("config_file_and_overrides") {
    const auto path = scratch("config.json", R"({"scan_points": 512, "root_tol": 1e-10})");
    REQUIRE(setenv("MVT_LAB_CONFIG", path.c_str(), 1) == 0);
    const Outcome o = run({"solve", "flett", "--fn", "x^3+2*x-1", "-a", "-2", "-b", "2", "--stable",
                           "--scan-points", "1024"});
    unsetenv("MVT_LAB_CONFIG");
    CHECK(o.code == 0);
    const Json req = o.json()["request"];
    CHECK(req["config"]["scan_points"] == 1024);
    CHECK(req["config"]["root_tol"].get<double>() == 1e-10);
    CHECK(req["config_overrides"]["scan_points"] == 1024);
    CHECK(req["config_overrides"]["root_tol"].get<double>() == 1e-10);

    const auto bad = scratch("bad_config.json", R"({"scan_pointz": 512})");
    REQUIRE(setenv("MVT_LAB_CONFIG", bad.c_str(), 1) == 0);
    const Outcome rejected = run({"solve", "flett", "--fn", "x", "-a", "0", "-b", "1"});
    unsetenv("MVT_LAB_CONFIG");
    CHECK(rejected.code == mvtlab::cli::exit_usage);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST_CASE("corpus_fixture_matches") {
    const Outcome o = run({"corpus", kFixture, "--stable"});
    CHECK(o.code == 0);
    const auto records = lines(o.out);
    REQUIRE(records.size() == 5);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(records[i]["line"] == i + 1);
        CHECK(records[i]["expect"] == "match");
    }
    const Json& summary = records.back()["summary"];
    CHECK(summary["records"] == 4);
    CHECK(summary["matched"] == 4);
    CHECK(summary["mismatched"] == 0);
    CHECK(summary["errors"] == 0);
}

TEST_CASE("corpus_edge_cases") {
    const auto empty = scratch("empty.ndjson", "");
    const Outcome e = run({"corpus", empty.string(), "--stable"});
    CHECK(e.code == 0);
    REQUIRE(lines(e.out).size() == 1);
    CHECK(lines(e.out)[0]["summary"]["records"] == 0);

    const auto malformed = scratch("malformed.ndjson", "{\"fn\": \"x^3\", \"a\": -1, \"b\": 1}\n{\"fn\": 3}\n");
    const Outcome m = run({"corpus", malformed.string()});
    CHECK(m.code == mvtlab::cli::exit_usage);
    CHECK(m.err.find("line 2") != std::string::npos);

    const auto wrong = scratch("wrong.ndjson", "{\"fn\": \"x^3\", \"a\": -1, \"b\": 1, \"expect\": {\"tong\": \"NotSatisfied\"}}\n");
    const Outcome w = run({"corpus", wrong.string(), "--stable"});
    CHECK(w.code == mvtlab::cli::exit_hypothesis);
    const auto rec = lines(w.out);
    CHECK(rec[0]["expect"] == "mismatch");
    CHECK(rec[0]["mismatches"].size() == 1);

    const auto missing = std::filesystem::temp_directory_path() / "mvtlab_does_not_exist.ndjson";
    CHECK(run({"corpus", missing.string()}).code == mvtlab::cli::exit_usage);
    for (const auto& p : {empty, malformed, wrong}) std::filesystem::remove(p);
}

TEST_CASE("dump_format") {
    CHECK(mvtlab::cli::dump(Json(0.1)) == "0.10000000000000001");
    CHECK(mvtlab::cli::dump(Json(1.0)) == "1");
    CHECK(mvtlab::cli::dump(Json(std::numeric_limits<double>::quiet_NaN())) == "null");
    CHECK(mvtlab::cli::parse_endpoint("pi/2") == doctest::Approx(1.5707963267948966));
    CHECK_THROWS(mvtlab::cli::parse_endpoint("x+1"));
}
