#include "mvtlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mvtlab/conditions.hpp"
#include "mvtlab/errors.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/theorems.hpp"

namespace mvtlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string number_text(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write(std::string& out, const Json& v, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
    case Json::value_t::number_float: out += number_text(v.get<double>()); return;
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [key, item] : v.items()) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(key).dump();
            out += indent < 0 ? ":" : ": ";
            write(out, item, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& item : v) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            write(out, item, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    default: out += v.dump(); return;
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

struct Common {
    std::optional<int> scan_points;
    std::optional<double> root_tol;
    std::optional<double> residual_tol;
    std::optional<double> quad_tol;
    bool json = false;
    bool csv = false;
    bool stable = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--scan-points", c.scan_points, "grid size of the sign-change scan");
    cmd->add_option("--root-tol", c.root_tol, "absolute root tolerance on x");
    cmd->add_option("--residual-tol", c.residual_tol, "relative residual tolerance");
    cmd->add_option("--quad-tol", c.quad_tol, "quadrature tolerance");
    auto* json = cmd->add_flag("--json", c.json, "JSON report (default)");
    auto* csv = cmd->add_flag("--csv", c.csv, "one CSV row per point");
    json->excludes(csv);
    cmd->add_flag("--stable", c.stable, "omit the timing block");
}

struct Settings {
    SolverConfig cfg;
    Json overrides = Json::object();
};

Settings resolve_config(const Common& c) {
    Settings s;
    if (const char* path = std::getenv("MVT_LAB_CONFIG"); path && *path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument(std::string("cannot read config file ") + path);
        Json file;
        try {
            file = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw std::invalid_argument(std::string("config file ") + path + ": " + e.what());
        }
        apply_config(s.cfg, file);
        for (const auto& [k, v] : file.items()) s.overrides[k] = v;
    }
    if (c.scan_points) s.overrides["scan_points"] = s.cfg.scan_points = *c.scan_points;
    if (c.root_tol) s.overrides["root_tol"] = s.cfg.root_tol = *c.root_tol;
    if (c.residual_tol) s.overrides["residual_tol"] = s.cfg.residual_tol = *c.residual_tol;
    if (c.quad_tol) s.overrides["quad_tol"] = s.cfg.quad_tol = *c.quad_tol;
    s.cfg.validate();
    return s;
}

Json config_json(const SolverConfig& cfg) {
    return {{"scan_points", cfg.scan_points},         {"root_tol", cfg.root_tol},
            {"residual_tol", cfg.residual_tol},       {"quad_tol", cfg.quad_tol},
            {"endpoint_margin", cfg.endpoint_margin}, {"singular_threshold", cfg.singular_threshold}};
}

Json error_json(const std::string& kind, const std::string& message) {
    return {{"kind", kind}, {"message", message}};
}

Json condition_json(const ConditionVector& c) {
    auto optional_number = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    return {{"flett", std::string(to_string(c.flett))},
            {"trahan", std::string(to_string(c.trahan))},
            {"tong", std::string(to_string(c.tong))},
            {"malesevic_t1", std::string(to_string(c.malesevic_t1))},
            {"malesevic_m1", std::string(to_string(c.malesevic_m1))},
            {"has_flett_point", c.has_flett_point},
            {"M", optional_number(c.m_of_f)},
            {"I", optional_number(c.i_of_f)}};
}

std::string signature(const ConditionVector& c) {
    std::string s;
    for (Verdict v : {c.flett, c.trahan, c.tong, c.malesevic_t1, c.malesevic_m1}) {
        s += to_string(v);
        s += ',';
    }
    s.back() = ';';
    return s + (c.has_flett_point ? "point" : "no-point");
}

void finish(std::ostream& out, Json report, const Common& c, Clock::time_point start) {
    if (!c.stable) {
        report["meta"] = {{"elapsed_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
    }
    out << dump(report, 2) << '\n';
}

struct SolveArgs {
    std::string theorem;
    std::string fn;
    std::optional<std::string> gn;
    std::optional<std::string> weight;
    std::optional<std::string> a;
    std::optional<std::string> b;
    int n = 1;
};

Json result_json(const Problem& problem, const TheoremResult& r, const SolverConfig& cfg) {
    Json points = Json::array();
    for (const PointResult& p : r.points) {
        bool verified = false;
        try {
            verified = verify(problem, r.theorem, p.xi, cfg, r.residual_scale).ok;
        } catch (const std::exception&) {
            verified = false;
        }
        points.push_back({{"xi", p.xi}, {"residual", p.residual}, {"verified", verified}});
    }
    Json j = {{"theorem", std::string(to_string(r.theorem))},
              {"hypothesis_satisfied", r.hypothesis_satisfied},
              {"degenerate", r.degenerate},
              {"residual_scale", r.residual_scale},
              {"points", points}};
    if (r.closest) j["closest"] = {{"xi", r.closest->xi}, {"residual", r.closest->residual}};
    return j;
}

int cmd_solve(const SolveArgs& args, const Common& common, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    Json request = {{"command", "solve"}, {"theorem", args.theorem}, {"fn", args.fn}};
    if (args.gn) request["gn"] = *args.gn;
    if (args.weight) request["weight"] = *args.weight;

    auto fail = [&](int code, const std::string& kind, const std::string& message, Json extra = {}) {
        err << "mvt_lab: " << message << '\n';
        Json report = {{"request", request}, {"error", error_json(kind, message)}};
        if (!extra.is_null()) report["results"] = extra;
        if (common.csv) return code;
        finish(out, report, common, start);
        return code;
    };

    const auto id = theorem_from_string(args.theorem);
    if (!id) return fail(exit_usage, "usage", "unknown theorem '" + args.theorem + "'");

    Problem problem;
    problem.theorem = *id;
    problem.order = args.n;
    Settings settings;
    try {
        settings = resolve_config(common);
        problem.f = parse(args.fn);
        if (args.gn) problem.g = parse(*args.gn);
        if (args.weight) problem.weight = parse(*args.weight);
        if (args.a || args.b || !fixed_unit_interval(*id)) {
            if (!args.a || !args.b) throw std::invalid_argument("both -a and -b are required");
            problem.interval = Interval(parse_endpoint(*args.a), parse_endpoint(*args.b));
        }
    } catch (const ParseError& e) {
        request["error_offset"] = e.offset();
        return fail(exit_usage, "parse", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_usage, "usage", e.what());
    }
    request["interval"] = {{"a", problem.interval.a()}, {"b", problem.interval.b()}};
    if (*id == TheoremId::pawlikowska) request["n"] = args.n;
    request["config"] = config_json(settings.cfg);
    request["config_overrides"] = settings.overrides;
    const SolverConfig& cfg = settings.cfg;

    std::vector<TheoremResult> results;
    try {
        results = solve(problem, cfg);
    } catch (const HypothesisError& e) {
        Json r = {{"theorem", std::string(to_string(*id))},
                  {"hypothesis_satisfied", false},
                  {"degenerate", false},
                  {"points", Json::array()}};
        return fail(exit_hypothesis, "hypothesis", e.what(), Json::array({r}));
    } catch (const NoRootFound& e) {
        request["closest"] = {{"xi", e.closest_x()}, {"residual", e.closest_residual()}};
        return fail(exit_numeric, "no_root", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_usage, "usage", e.what());
    } catch (const ParseError& e) {
        return fail(exit_usage, "parse", e.what());
    } catch (const std::exception& e) {
        return fail(exit_numeric, "numeric", e.what());
    }

    int code = exit_ok;
    Json list = Json::array();
    for (const TheoremResult& r : results) {
        list.push_back(result_json(problem, r, cfg));
        if (r.found()) continue;
        if (!r.hypothesis_satisfied) {
            code = std::max<int>(code, exit_hypothesis);
            err << "mvt_lab: " << to_string(r.theorem) << ": hypothesis not satisfied and no point found\n";
        } else {
            code = exit_numeric;
            err << "mvt_lab: " << to_string(r.theorem) << ": hypothesis holds but no point was found\n";
        }
    }

    if (common.csv) {
        out << "theorem,xi,residual,verified,degenerate,hypothesis_satisfied\n";
        for (const Json& r : list) {
            for (const Json& p : r["points"]) {
                out << r["theorem"].get<std::string>() << ',' << number_text(p["xi"].get<double>()) << ','
                    << number_text(p["residual"].get<double>()) << ',' << p["verified"].dump() << ','
                    << r["degenerate"].dump() << ',' << r["hypothesis_satisfied"].dump() << '\n';
            }
        }
        return code;
    }
    finish(out, {{"request", request}, {"results", list}}, common, start);
    return code;
}

struct ClassifyArgs {
    std::string fn;
    std::string a;
    std::string b;
};

const char* kCsvConditionHeader = "flett,trahan,tong,malesevic_t1,malesevic_m1,has_flett_point,M,I";

std::string condition_csv(const Json& c) {
    std::string row;
    for (const char* k : {"flett", "trahan", "tong", "malesevic_t1", "malesevic_m1"}) {
        row += c[k].get<std::string>() + ',';
    }
    row += c["has_flett_point"].dump() + ',';
    row += (c["M"].is_null() ? "" : number_text(c["M"].get<double>())) + ',';
    row += c["I"].is_null() ? "" : number_text(c["I"].get<double>());
    return row;
}

int cmd_classify(const ClassifyArgs& args, const Common& common, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    Json request = {{"command", "classify"}, {"fn", args.fn}};
    auto fail = [&](int code, const std::string& kind, const std::string& message) {
        err << "mvt_lab: " << message << '\n';
        if (!common.csv) finish(out, {{"request", request}, {"error", error_json(kind, message)}}, common, start);
        return code;
    };

    Settings settings;
    Expr f;
    std::optional<Interval> iv;
    try {
        settings = resolve_config(common);
        f = parse(args.fn);
        iv.emplace(parse_endpoint(args.a), parse_endpoint(args.b));
    } catch (const ParseError& e) {
        request["error_offset"] = e.offset();
        return fail(exit_usage, "parse", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_usage, "usage", e.what());
    }
    request["interval"] = {{"a", iv->a()}, {"b", iv->b()}};
    request["config"] = config_json(settings.cfg);
    request["config_overrides"] = settings.overrides;

    Json vector;
    try {
        vector = condition_json(classify(f, *iv, settings.cfg));
    } catch (const std::exception& e) {
        return fail(exit_numeric, "numeric", e.what());
    }
    if (common.csv) {
        out << kCsvConditionHeader << '\n' << condition_csv(vector) << '\n';
        return exit_ok;
    }
    finish(out, {{"request", request}, {"condition_vector", vector}}, common, start);
    return exit_ok;
}

struct CorpusRecord {
    std::size_t line = 0;
    std::string fn;
    Expr f;
    Interval interval{0.0, 1.0};
    Json expect;  // null when absent
};

double endpoint_field(const Json& v, const char* name) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_endpoint(v.get<std::string>());
    throw std::invalid_argument(std::string("'") + name + "' must be a number or an expression string");
}

void check_expect(const Json& expect) {
    if (!expect.is_object()) throw std::invalid_argument("'expect' must be an object");
    for (const auto& [k, v] : expect.items()) {
        if (k == "has_flett_point") {
            if (!v.is_boolean()) throw std::invalid_argument("'expect.has_flett_point' must be a boolean");
        } else if (k == "M" || k == "I") {
            if (!v.is_number()) throw std::invalid_argument("'expect." + k + "' must be a number");
        } else if (k == "flett" || k == "trahan" || k == "tong" || k == "malesevic_t1" ||
                   k == "malesevic_m1") {
            if (!v.is_string() || !verdict_from_string(v.get<std::string>())) {
                throw std::invalid_argument("'expect." + k + "' is not a verdict");
            }
        } else {
            throw std::invalid_argument("unknown key 'expect." + k + "'");
        }
    }
}

CorpusRecord read_record(const std::string& text, std::size_t line) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
    for (const char* key : {"fn", "a", "b"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("missing '") + key + "'");
    }
    if (!j["fn"].is_string()) throw std::invalid_argument("'fn' must be a string");
    CorpusRecord r;
    r.line = line;
    r.fn = j["fn"].get<std::string>();
    r.f = parse(r.fn);
    r.interval = Interval(endpoint_field(j["a"], "a"), endpoint_field(j["b"], "b"));
    if (j.contains("expect")) {
        check_expect(j["expect"]);
        r.expect = j["expect"];
    }
    return r;
}

std::vector<std::string> mismatches(const Json& expect, const Json& actual) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : expect.items()) {
        const Json& got = actual[k];
        bool same;
        if (v.is_number()) {
            same = got.is_number() &&
                   std::fabs(got.get<double>() - v.get<double>()) <= 1e-8 * std::max(1.0, std::fabs(v.get<double>()));
        } else {
            same = got == v;
        }
        if (!same) keys.push_back(k);
    }
    return keys;
}

int cmd_corpus(const std::string& path, const Common& common, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    Settings settings;
    try {
        settings = resolve_config(common);
    } catch (const std::invalid_argument& e) {
        err << "mvt_lab: " << e.what() << '\n';
        return exit_usage;
    }
    std::ifstream in(path);
    if (!in) {
        err << "mvt_lab: cannot read " << path << '\n';
        return exit_usage;
    }

    std::vector<CorpusRecord> records;
    std::string text;
    for (std::size_t line = 1; std::getline(in, text); ++line) {
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(read_record(text, line));
        } catch (const std::exception& e) {
            err << "mvt_lab: " << path << ": line " << line << ": " << e.what() << '\n';
            if (!common.csv) {
                Json report = {{"error", error_json("malformed_record", e.what())}, {"line", line}};
                out << dump(report) << '\n';
            }
            return exit_usage;
        }
    }

    std::size_t matched = 0, mismatched = 0, failed = 0;
    std::map<std::string, std::size_t> vectors;
    if (common.csv) out << "line,fn,a,b," << kCsvConditionHeader << ",expect\n";
    for (const CorpusRecord& r : records) {
        Json row = {{"line", r.line},
                    {"fn", r.fn},
                    {"interval", {{"a", r.interval.a()}, {"b", r.interval.b()}}}};
        std::string status = "none";
        try {
            const ConditionVector c = classify(r.f, r.interval, settings.cfg);
            ++vectors[signature(c)];
            row["condition_vector"] = condition_json(c);
            if (!r.expect.is_null()) {
                const auto bad = mismatches(r.expect, row["condition_vector"]);
                status = bad.empty() ? "match" : "mismatch";
                (bad.empty() ? matched : mismatched)++;
                if (!bad.empty()) {
                    row["mismatches"] = bad;
                    err << "mvt_lab: line " << r.line << ": mismatch in";
                    for (const auto& k : bad) err << ' ' << k;
                    err << '\n';
                }
            }
        } catch (const std::exception& e) {
            ++failed;
            status = "error";
            row["error"] = error_json("numeric", e.what());
            err << "mvt_lab: line " << r.line << ": " << e.what() << '\n';
        }
        row["expect"] = status;
        if (common.csv) {
            out << r.line << ',' << csv_field(r.fn) << ',' << number_text(r.interval.a()) << ','
                << number_text(r.interval.b()) << ','
                << (row.contains("condition_vector") ? condition_csv(row["condition_vector"]) : ",,,,,,,")
                << ',' << status << '\n';
        } else {
            out << dump(row) << '\n';
        }
    }

    Json counts = Json::object();
    for (const auto& [sig, n] : vectors) counts[sig] = n;
    Json summary = {{"summary",
                     {{"records", records.size()},
                      {"matched", matched},
                      {"mismatched", mismatched},
                      {"errors", failed},
                      {"vectors", counts}}}};
    if (!common.csv) {
        if (!common.stable) {
            summary["meta"] = {
                {"elapsed_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
        }
        out << dump(summary) << '\n';
    }
    if (failed > 0) return exit_numeric;
    return mismatched > 0 ? exit_hypothesis : exit_ok;
}

} // namespace

std::string dump(const Json& value, int indent) {
    std::string out;
    write(out, value, indent, 0);
    return out;
}

void apply_config(SolverConfig& cfg, const Json& fields) {
    if (!fields.is_object()) throw std::invalid_argument("config must be a JSON object");
    auto real = [](const std::string& key, const Json& v) {
        if (!v.is_number()) throw std::invalid_argument("config '" + key + "' must be a number");
        return v.get<double>();
    };
    for (const auto& [key, v] : fields.items()) {
        if (key == "scan_points") {
            if (!v.is_number_integer()) throw std::invalid_argument("config 'scan_points' must be an integer");
            cfg.scan_points = v.get<int>();
        } else if (key == "root_tol") {
            cfg.root_tol = real(key, v);
        } else if (key == "residual_tol") {
            cfg.residual_tol = real(key, v);
        } else if (key == "quad_tol") {
            cfg.quad_tol = real(key, v);
        } else if (key == "endpoint_margin") {
            cfg.endpoint_margin = real(key, v);
        } else if (key == "singular_threshold") {
            cfg.singular_threshold = real(key, v);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

double parse_endpoint(const std::string& text) {
    const Expr e = parse(text);
    if (e.depends_on_x()) throw std::invalid_argument("endpoint '" + text + "' must not depend on x");
    const double v = e(0.0);
    if (!std::isfinite(v)) throw std::invalid_argument("endpoint '" + text + "' is not finite");
    return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Locate and verify mean value points", "mvt_lab"};
    app.require_subcommand(1);

    Common common;
    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "find the points of one theorem");
    solve_cmd->add_option("theorem", solve_args.theorem, "theorem id, e.g. flett, meyers-2.3, lupu-4.6")
        ->required();
    solve_cmd->add_option("--fn", solve_args.fn, "f(x)")->required();
    solve_cmd->add_option("--gn", solve_args.gn, "g(x)");
    solve_cmd->add_option("--weight", solve_args.weight, "weight phi(x)");
    solve_cmd->add_option("-a", solve_args.a, "left endpoint");
    solve_cmd->add_option("-b", solve_args.b, "right endpoint");
    solve_cmd->add_option("--n", solve_args.n, "pawlikowska order");
    add_common(solve_cmd, common);

    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand("classify", "condition vector of f on [a, b]");
    classify_cmd->add_option("--fn", classify_args.fn, "f(x)")->required();
    classify_cmd->add_option("-a", classify_args.a, "left endpoint")->required();
    classify_cmd->add_option("-b", classify_args.b, "right endpoint")->required();
    add_common(classify_cmd, common);

    std::string corpus_path;
    auto* corpus_cmd = app.add_subcommand("corpus", "classify every record of an NDJSON file");
    corpus_cmd->add_option("path", corpus_path, "file with one {fn, a, b, expect} object per line")
        ->required();
    add_common(corpus_cmd, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*solve_cmd) return cmd_solve(solve_args, common, out, err);
    if (*classify_cmd) return cmd_classify(classify_args, common, out, err);
    return cmd_corpus(corpus_path, common, out, err);
}

} // namespace mvtlab::cli
