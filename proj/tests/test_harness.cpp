#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qmpl/harness.hpp"

using namespace qmpl;

namespace {

// ---- minimal JSON-schema checker ----
//
// Understands the subset the schemas in schemas/ actually use: type,
// enum, required, properties, additionalProperties (boolean form),
// items, minimum, anyOf, and local "#/definitions/..." references.
// Violations are collected as strings so a failing test names the path.

const json* resolve_ref(const json& root, const std::string& ref) {
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) return nullptr;
    std::string name = ref.substr(prefix.size());
    auto defs = root.find("definitions");
    if (defs == root.end()) return nullptr;
    auto it = defs->find(name);
    return it == defs->end() ? nullptr : &*it;
}

bool type_matches(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void check_schema(const json& root, const json& schema, const json& value,
                  const std::string& path, std::vector<std::string>& errors) {
    if (schema.contains("$ref")) {
        const json* target = resolve_ref(root, schema.at("$ref").get<std::string>());
        if (target == nullptr) {
            errors.push_back(path + ": unresolvable $ref " + schema.at("$ref").dump());
            return;
        }
        check_schema(root, *target, value, path, errors);
        return;
    }
    if (schema.contains("anyOf")) {
        for (const auto& alt : schema.at("anyOf")) {
            std::vector<std::string> sub;
            check_schema(root, alt, value, path, sub);
            if (sub.empty()) return;
        }
        errors.push_back(path + ": no anyOf alternative matched " + value.dump());
        return;
    }
    if (schema.contains("enum")) {
        for (const auto& allowed : schema.at("enum"))
            if (value == allowed) return;
        errors.push_back(path + ": " + value.dump() + " not in enum");
        return;
    }
    if (schema.contains("type") &&
        !type_matches(value, schema.at("type").get<std::string>())) {
        errors.push_back(path + ": expected " + schema.at("type").get<std::string>() +
                         ", got " + value.dump().substr(0, 40));
        return;
    }
    if (schema.contains("minimum") && value.is_number()) {
        if (value.get<double>() < schema.at("minimum").get<double>())
            errors.push_back(path + ": " + value.dump() + " below minimum");
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required key " + key.dump());
        const json* props = schema.contains("properties") ? &schema.at("properties") : nullptr;
        bool extra_ok = true;
        if (schema.contains("additionalProperties"))
            extra_ok = schema.at("additionalProperties").get<bool>();
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props != nullptr && props->contains(it.key())) {
                check_schema(root, props->at(it.key()), it.value(),
                             path + "/" + it.key(), errors);
            } else if (!extra_ok) {
                errors.push_back(path + ": unexpected key '" + it.key() + "'");
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (size_t i = 0; i < value.size(); ++i)
            check_schema(root, schema.at("items"), value[i],
                         path + "/" + std::to_string(i), errors);
    }
}

json load_schema(const std::string& name) {
    std::ifstream in(std::string(QMPL_SOURCE_DIR) + "/schemas/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

void expect_valid(const json& schema, const json& value) {
    std::vector<std::string> errors;
    check_schema(schema, schema, value, "$", errors);
    if (!errors.empty()) {
        std::string all;
        for (const auto& e : errors) all += e + "\n";
        INFO(all);
        REQUIRE(errors.empty());
    }
}

// ---- CLI driver ----

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    std::string cmd = std::string(QMPL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliRun r;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden_path(const std::string& name) {
    return std::string(QMPL_SOURCE_DIR) + "/tests/golden/" + name;
}

RunConfig exact_config(std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.K = 12;
    return cfg;
}

} // namespace

TEST_CASE("parameter streams are deterministic per (seed, suite, index)") {
    ParamGen a(7, "symmetry", 3);
    ParamGen b(7, "symmetry", 3);
    for (int i = 0; i < 16; ++i) REQUIRE(a.u64() == b.u64());

    ParamGen c(7, "symmetry", 4);
    ParamGen d(7, "derivative", 3);
    ParamGen e(8, "symmetry", 3);
    bool all_equal = true;
    ParamGen a2(7, "symmetry", 3);
    for (int i = 0; i < 16; ++i) {
        std::uint64_t ref = a2.u64();
        all_equal = all_equal && ref == c.u64() && ref == d.u64() && ref == e.u64();
    }
    REQUIRE_FALSE(all_equal);
}

TEST_CASE("generated rationals respect their documented ranges") {
    ParamGen g(123, "ranges", 0);
    for (int i = 0; i < 200; ++i) {
        Rational h = g.half_unit_rational();
        REQUIRE(h != 0);
        REQUIRE(abs(h) * 2 <= 1);
        Rational p = g.positive_unit_rational();
        REQUIRE(p > 0);
        REQUIRE(p <= 1);
        Composition c = g.composition(3, 6);
        REQUIRE(c.depth() >= 1);
        REQUIRE(c.depth() <= 3);
        REQUIRE(c.weight() <= 6);
    }
}

TEST_CASE("run config validates, round-trips, and loads from files") {
    RunConfig cfg;
    cfg.mode = ScalarMode::floating;
    cfg.precision_bits = 192;
    cfg.K = 17;
    cfg.lattice_cap = 99;
    cfg.seed = 424242;
    cfg.format = OutputFormat::csv;

    RunConfig back = RunConfig::from_json(cfg.to_json());
    REQUIRE(back.to_json() == cfg.to_json());
    expect_valid(load_schema("run_config.schema.json"), cfg.to_json());

    SECTION("invalid values are rejected") {
        RunConfig bad;
        bad.K = -1;
        REQUIRE_THROWS_AS(bad.validate(), qmpl::error);
        bad = RunConfig{};
        bad.lattice_cap = 0;
        REQUIRE_THROWS_AS(bad.validate(), qmpl::error);
        bad = RunConfig{};
        bad.precision_bits = 1;
        bad.mode = ScalarMode::floating;
        REQUIRE_THROWS_AS(bad.validate(), qmpl::error);
    }

    SECTION("partial config files override only their keys") {
        std::string path = "partial_config_test.json";
        {
            std::ofstream out(path);
            out << R"({"K": 5, "seed": 99})";
        }
        RunConfig loaded = RunConfig::load(path);
        REQUIRE(loaded.K == 5);
        REQUIRE(loaded.seed == 99);
        REQUIRE(loaded.mode == ScalarMode::exact);
        std::remove(path.c_str());
    }

    SECTION("environment variable points at the default config") {
        std::string path = "env_config_test.json";
        {
            std::ofstream out(path);
            out << R"({"K": 6})";
        }
        setenv("QMPL_CONFIG", path.c_str(), 1);
        RunConfig fromenv = RunConfig::from_environment();
        unsetenv("QMPL_CONFIG");
        std::remove(path.c_str());
        REQUIRE(fromenv.K == 6);

        REQUIRE(RunConfig::from_environment().K == RunConfig{}.K);

        setenv("QMPL_CONFIG", "does_not_exist_anywhere.json", 1);
        REQUIRE_THROWS_AS(RunConfig::from_environment(), qmpl::error);
        unsetenv("QMPL_CONFIG");
    }

    SECTION("malformed config reports a parse error") {
        std::string path = "broken_config_test.json";
        {
            std::ofstream out(path);
            out << "{not json";
        }
        try {
            RunConfig::load(path);
            FAIL("expected parse error");
        } catch (const qmpl::error& e) {
            REQUIRE(e.code() == errc::parse_error);
        }
        std::remove(path.c_str());
    }
}

TEST_CASE("every suite is deterministic for a fixed config") {
    RunConfig cfg = exact_config(31);
    for (const auto& suite : suite_names()) {
        auto first = run_suite(suite, 2, cfg);
        auto second = run_suite(suite, 2, cfg);
        REQUIRE(reports_to_json(first).dump() == reports_to_json(second).dump());
    }
}

TEST_CASE("all suites pass in exact mode and reports validate against schema") {
    json schema = load_schema("verification_report.schema.json");
    RunConfig cfg = exact_config(5);
    for (const auto& suite : suite_names()) {
        INFO(suite);
        auto reports = run_suite(suite, 3, cfg);
        REQUIRE(reports.size() >= 3);
        REQUIRE(all_passed(reports));
        for (const auto& r : reports) expect_valid(schema, r.to_json());
    }
}

TEST_CASE("float-mode suites stay within their budgets") {
    RunConfig cfg;
    cfg.mode = ScalarMode::floating;
    cfg.precision_bits = 128;
    cfg.K = 12;
    cfg.seed = 17;
    for (const auto& suite : suite_names()) {
        INFO(suite);
        auto reports = run_suite(suite, 2, cfg);
        REQUIRE(all_passed(reports));
    }
}

TEST_CASE("unknown suites are rejected") {
    RunConfig cfg;
    try {
        run_suite("bogus", 1, cfg);
        FAIL("expected unsupported");
    } catch (const qmpl::error& e) {
        REQUIRE(e.code() == errc::unsupported);
    }
}

TEST_CASE("all_passed flips on any Fail verdict") {
    VerificationReport ok;
    ok.verdict = Verdict::exact_pass;
    VerificationReport bad;
    bad.verdict = Verdict::fail;
    REQUIRE(all_passed({ok}));
    REQUIRE_FALSE(all_passed({ok, bad}));
    VerificationReport skipped;
    skipped.verdict = Verdict::unsupported;
    REQUIRE(all_passed({ok, skipped}));
}

TEST_CASE("csv quoting follows rfc 4180") {
    REQUIRE(csv_escape("plain") == "plain");
    REQUIRE(csv_escape("a,b") == "\"a,b\"");
    REQUIRE(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    REQUIRE(csv_escape("line\r\nbreak") == "\"line\r\nbreak\"");
    REQUIRE(csv_row({"a", "b,c"}) == "a,\"b,c\"\r\n");

    std::vector<VerificationReport> reps(1);
    reps[0].relation_id = "demo";
    reps[0].verdict = Verdict::exact_pass;
    std::string csv = reports_to_csv(reps);
    REQUIRE(csv.rfind("relation_id,verdict,", 0) == 0);
    REQUIRE(csv.find("\r\n") != std::string::npos);
}

TEST_CASE("qmzv grid table has one row per grid point") {
    RunConfig cfg;
    cfg.K = 40;
    std::vector<Scalar> grid = {Scalar::exact(Rational(2)),
                                Scalar::exact(Rational(3, 2))};
    Table t = table_qmzv_grid(Composition({2}), grid, cfg);
    REQUIRE(t.columns == std::vector<std::string>{"q", "value", "rescaled",
                                                  "tail_bound", "terms"});
    REQUIRE(t.rows.size() == 2);
    // (1-2)^2 = 1, so the rescaled column equals the raw value at q = 2.
    REQUIRE(t.rows[0][1] == t.rows[0][2]);
    REQUIRE(t.rows[0][0] == "2");

    expect_valid(load_schema("table.schema.json"), t.to_json());

    std::string csv = t.to_csv();
    REQUIRE(csv.rfind("q,value,rescaled,tail_bound,terms\r\n", 0) == 0);

    Table empty = table_qmzv_grid(Composition({2}), {}, cfg);
    REQUIRE(empty.rows.empty());
}

TEST_CASE("limit sweep deviation column decreases") {
    RunConfig cfg;
    cfg.mode = ScalarMode::floating;
    cfg.precision_bits = 128;
    cfg.K = 400;
    Table t = table_limit_sweep(Composition({2}), Scalar::exact(Rational(1, 2)), 4, 8, cfg);
    REQUIRE(t.rows.size() == 5);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : t.rows) {
        double dev = std::stod(row.back());
        REQUIRE(dev < prev);
        prev = dev;
    }

    Table empty = table_limit_sweep(Composition({2}), Scalar::exact(Rational(1, 2)), 6, 5, cfg);
    REQUIRE(empty.rows.empty());
}

TEST_CASE("cli evaluates the depth-one example exactly") {
    CliRun r = run_cli("eval --kind qmpl --comp 1 --z 1/2 --q 1/2 --trunc 3");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("value") == "31/21");
    REQUIRE(j.at("terms_summed") == 3);
    expect_valid(load_schema("eval_result.schema.json"), j);
}

TEST_CASE("cli classical evaluation brackets the zeta value") {
    CliRun r = run_cli(
        "eval --kind classical --comp 2 --z 1 --mode float --precision 128 --trunc 4000");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    expect_valid(load_schema("eval_result.schema.json"), j);
    double v = std::stod(j.at("value").get<std::string>());
    double tail = j.at("tail_bound").get<double>();
    REQUIRE(v <= 1.6449340668482264);
    REQUIRE(v + tail >= 1.6449340668482264);
}

TEST_CASE("cli rejects a divergent q-zeta request with a structured error") {
    CliRun r = run_cli("zeta --comp 2 --q 1/2");
    REQUIRE(r.exit_code == 3);
    json j = json::parse(r.out);
    REQUIRE(j.at("error").at("code") == "divergent_series");
    expect_valid(load_schema("error.schema.json"), j);
}

TEST_CASE("cli verify output is byte-identical across runs and validates") {
    std::string p1 = "verify_run_1.json";
    std::string p2 = "verify_run_2.json";
    CliRun r1 = run_cli("verify --suite exchange --count 4 --seed 11 --out " + p1);
    CliRun r2 = run_cli("verify --suite exchange --count 4 --seed 11 --out " + p2);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    std::string a = read_file(p1);
    std::string b = read_file(p2);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    REQUIRE(a == b);
    expect_valid(load_schema("verify_output.schema.json"), json::parse(a));
}

TEST_CASE("cli verify rejects unknown suites with a usage exit") {
    CliRun r = run_cli("verify --suite nonsense --count 1");
    REQUIRE(r.exit_code == 2);
}

TEST_CASE("cli table with an empty grid exits zero") {
    CliRun r = run_cli("table --kind qmzv_grid --comp 2 --q-grid '' --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out == "q,value,rescaled,tail_bound,terms\r\n");
}

TEST_CASE("cli closure report validates against the schema") {
    CliRun r = run_cli("closure --a-comp 1 --a-slots 1 --b-comp 2 --b-slots 2 --degree-cap 8");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    expect_valid(load_schema("verification_report.schema.json"), j);
    expect_valid(load_schema("closure_result.schema.json"), j.at("details"));
    REQUIRE(j.at("details").at("closed") == true);
}

TEST_CASE("cli reads defaults from the config file named by the environment") {
    std::string path = "cli_env_config.json";
    {
        std::ofstream out(path);
        out << R"({"K": 3})";
    }
    setenv("QMPL_CONFIG", path.c_str(), 1);
    CliRun r = run_cli("eval --kind qmpl --comp 1 --z 1/2 --q 1/2");
    unsetenv("QMPL_CONFIG");
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("K") == 3);
    REQUIRE(j.at("value") == "31/21");
}

TEST_CASE("cli outputs match committed golden files") {
    struct Golden {
        std::string args;
        std::string file;
    };
    std::vector<Golden> cases = {
        {"eval --kind qmpl --comp 1 --z 1/2 --q 1/2 --trunc 3", "eval_qmpl.json"},
        {"verify --suite exchange --count 3 --seed 5", "verify_exchange.json"},
        {"table --kind qmzv_grid --comp 2 --q-grid '2;3/2' --trunc 8 --format csv",
         "table_qmzv_grid.csv"},
        {"closure --a-comp 1 --a-slots 1 --b-comp 1 --b-slots 2 --degree-cap 8",
         "closure_pair.json"},
    };
    for (const auto& g : cases) {
        INFO(g.file);
        CliRun r = run_cli(g.args);
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out == read_file(golden_path(g.file)));
    }
}
