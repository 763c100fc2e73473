#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qmpl/harness.hpp"
#include "qmpl/parse.hpp"

namespace {

using namespace qmpl;

// 0 success, 1 failed verdicts, 2 usage, 3 math/domain/io errors
constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_error = 3;

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Composition parse_comp(const std::string& s) {
    std::vector<int> n;
    for (const auto& tok : split_list(s, ','))
        n.push_back(static_cast<int>(std::stol(tok)));
    return Composition(std::move(n));
}

std::vector<Scalar> parse_scalar_list(const std::string& s, const RunConfig& cfg) {
    std::vector<Scalar> out;
    for (const auto& tok : split_list(s, ';'))
        out.push_back(parse_scalar(tok, cfg.mode, cfg.precision_bits));
    return out;
}

std::vector<SlotSet> parse_slots(const std::string& s) {
    std::vector<SlotSet> out;
    for (const auto& slot_tok : split_list(s, ';')) {
        SlotSet slot;
        for (const auto& var_tok : split_list(slot_tok, ','))
            slot.push_back(static_cast<std::uint32_t>(std::stoul(var_tok)));
        std::sort(slot.begin(), slot.end());
        out.push_back(std::move(slot));
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    require(f.good(), errc::io_error, "cannot open output file: " + out_path);
    f << text;
    require(f.good(), errc::io_error, "write failed: " + out_path);
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

json eval_result_json(const std::string& kind, const Composition& comp,
                      const std::vector<Scalar>& z, const Scalar* q,
                      const RunConfig& cfg, const EvalResult& r) {
    json j;
    j["kind"] = kind;
    j["comp"] = comp.indices();
    if (!z.empty()) {
        json zs = json::array();
        for (const auto& s : z) zs.push_back(s.to_string());
        j["z"] = zs;
    }
    if (q != nullptr) j["q"] = q->to_string();
    j["mode"] = mode_name(cfg.mode);
    if (cfg.mode == ScalarMode::floating) j["precision_bits"] = cfg.precision_bits;
    j["K"] = cfg.K;
    j["value"] = r.value.to_string();
    if (r.tail.is_finite())
        j["tail_bound"] = r.tail.value;
    else
        j["tail_bound"] = r.tail.kind == TailBound::Kind::unbounded ? "unbounded" : "none";
    j["terms_summed"] = r.terms_summed;
    return j;
}

std::string eval_result_csv(const json& j) {
    std::string tail = j.at("tail_bound").is_number()
                           ? format_double(j.at("tail_bound").get<double>())
                           : j.at("tail_bound").get<std::string>();
    std::string z;
    if (j.contains("z")) {
        for (const auto& s : j.at("z")) {
            if (!z.empty()) z += ";";
            z += s.get<std::string>();
        }
    }
    std::string out = csv_row({"kind", "comp", "z", "q", "mode", "K", "value",
                               "tail_bound", "terms_summed"});
    out += csv_row({j.at("kind").get<std::string>(), j.at("comp").dump(), z,
                    j.contains("q") ? j.at("q").get<std::string>() : "",
                    j.at("mode").get<std::string>(), std::to_string(j.at("K").get<long>()),
                    j.at("value").get<std::string>(), tail,
                    std::to_string(j.at("terms_summed").get<std::uint64_t>())});
    return out;
}

struct GlobalFlags {
    std::string mode;
    long precision = 0;
    long trunc = -1;
    long lattice_cap = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string format;
    std::string out_path;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--mode", g.mode, "scalar mode")->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--precision", g.precision, "float precision in bits");
    cmd->add_option("--trunc", g.trunc, "series truncation bound K");
    cmd->add_option("--lattice-cap", g.lattice_cap, "Jackson lattice cutoff");
    cmd->add_option("--seed", g.seed, "RNG seed for generated suites")
        ->each([&g](const std::string&) { g.seed_set = true; });
    cmd->add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", g.out_path, "write output to this file instead of stdout");
}

RunConfig resolve_config(const GlobalFlags& g) {
    RunConfig cfg = RunConfig::from_environment();
    if (!g.mode.empty()) cfg.mode = parse_mode(g.mode);
    if (g.precision > 0) cfg.precision_bits = g.precision;
    if (g.trunc >= 0) cfg.K = g.trunc;
    if (g.lattice_cap > 0) cfg.lattice_cap = g.lattice_cap;
    if (g.seed_set) cfg.seed = g.seed;
    if (!g.format.empty()) cfg.format = parse_format(g.format);
    cfg.validate();
    return cfg;
}

int run_eval(const std::string& kind, const std::string& comp_str, const std::string& z_str,
             const std::string& q_str, const GlobalFlags& g) {
    RunConfig cfg = resolve_config(g);
    Composition comp = parse_comp(comp_str);

    EvalResult r;
    std::vector<Scalar> z;
    Scalar qv;
    bool has_q = false;
    TruncationSpec trunc{cfg.K, TailMethod::geometric};
    if (kind == "qmzv") {
        require(!q_str.empty(), errc::invalid_parameter, "qmzv needs --q");
        qv = parse_scalar(q_str, cfg.mode, cfg.precision_bits);
        has_q = true;
        r = eval_qmzv(comp, QParam::make(qv), trunc);
    } else if (kind == "classical") {
        require(!z_str.empty(), errc::invalid_parameter, "classical needs --z");
        z = parse_scalar_list(z_str, cfg);
        r = eval_classical_mpl(comp, z, trunc);
    } else {
        require(!z_str.empty() && !q_str.empty(), errc::invalid_parameter,
                "qmpl needs --z and --q");
        z = parse_scalar_list(z_str, cfg);
        qv = parse_scalar(q_str, cfg.mode, cfg.precision_bits);
        has_q = true;
        r = eval_qmpl(comp, z, QParam::make(qv), trunc);
    }

    json j = eval_result_json(kind, comp, z, has_q ? &qv : nullptr, cfg, r);
    emit(cfg.format == OutputFormat::json ? render_json(j) : eval_result_csv(j),
         g.out_path);
    return exit_ok;
}

int run_table(const std::string& kind, const std::string& comp_str, const std::string& grid,
              const std::string& z_str, int j_lo, int j_hi, const GlobalFlags& g) {
    RunConfig cfg = resolve_config(g);
    Composition comp = parse_comp(comp_str);
    Table t;
    if (kind == "qmzv_grid") {
        std::vector<Scalar> qs =
            grid.empty() ? std::vector<Scalar>{} : parse_scalar_list(grid, cfg);
        t = table_qmzv_grid(comp, qs, cfg);
    } else {
        require(!z_str.empty(), errc::invalid_parameter, "limit_sweep needs --z");
        Scalar z = parse_scalar(z_str, cfg.mode, cfg.precision_bits);
        t = table_limit_sweep(comp, z, j_lo, j_hi, cfg);
    }
    emit(cfg.format == OutputFormat::json ? render_json(t.to_json()) : t.to_csv(),
         g.out_path);
    return exit_ok;
}

int run_verify(const std::string& suite, long count, const GlobalFlags& g) {
    RunConfig cfg = resolve_config(g);
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = suite_names();
    } else {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
            std::cerr << "unknown suite: " << suite << "\n";
            return exit_usage;
        }
        suites.push_back(suite);
    }

    std::vector<VerificationReport> all;
    json by_suite = json::array();
    for (const auto& s : suites) {
        auto reps = run_suite(s, count, cfg);
        by_suite.push_back(suite_output_json(s, count, cfg, reps));
        for (auto& r : reps) all.push_back(std::move(r));
    }

    std::string text;
    if (cfg.format == OutputFormat::json) {
        json out;
        out["config"] = cfg.to_json();
        out["suites"] = by_suite;
        text = render_json(out);
    } else {
        text = reports_to_csv(all);
    }
    emit(text, g.out_path);
    return all_passed(all) ? exit_ok : exit_failed;
}

int run_closure(const std::string& a_comp, const std::string& a_slots,
                const std::string& b_comp, const std::string& b_slots, long degree_cap,
                int catalog_weight, const GlobalFlags& g) {
    RunConfig cfg = resolve_config(g);

    if (catalog_weight > 0) {
        // every ordered depth-1 pair in increasing variable order with
        // total weight up to the bound
        json arr = json::array();
        bool ok = true;
        for (int wa = 1; wa < catalog_weight; ++wa) {
            for (int wb = 1; wa + wb <= catalog_weight; ++wb) {
                VerificationReport rep = verify_ordered_closure(
                    depth1_factor(wa, 1), depth1_factor(wb, 2), degree_cap);
                ok = ok && rep.passed();
                arr.push_back(rep.to_json());
            }
        }
        json out;
        out["degree_cap"] = degree_cap;
        out["max_weight"] = catalog_weight;
        out["relations"] = arr;
        emit(render_json(out), g.out_path);
        return ok ? exit_ok : exit_failed;
    }

    OrderedFactor a{parse_comp(a_comp).indices(), parse_slots(a_slots)};
    OrderedFactor b{parse_comp(b_comp).indices(), parse_slots(b_slots)};
    VerificationReport rep = verify_ordered_closure(a, b, degree_cap);
    if (cfg.format == OutputFormat::json) {
        emit(render_json(rep.to_json()), g.out_path);
    } else {
        emit(reports_to_csv({rep}), g.out_path);
    }
    return rep.passed() ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed multiple polylogarithm toolkit"};
    app.require_subcommand(1);

    GlobalFlags g;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a truncated series");
    std::string eval_kind = "qmpl", eval_comp, eval_z, eval_q;
    eval_cmd->add_option("--kind", eval_kind, "series kind")
        ->check(CLI::IsMember({"qmpl", "classical", "qmzv"}));
    eval_cmd->add_option("--comp", eval_comp, "composition, e.g. 2,1")->required();
    eval_cmd->add_option("--z", eval_z, "arguments, ';' separated (a/b or decimal; re,im)");
    eval_cmd->add_option("--q", eval_q, "deformation parameter");
    add_global_flags(eval_cmd, g);

    auto* zeta_cmd = app.add_subcommand("zeta", "evaluate a zeta value (all arguments 1)");
    std::string zeta_comp, zeta_q;
    zeta_cmd->add_option("--comp", zeta_comp, "composition")->required();
    zeta_cmd->add_option("--q", zeta_q, "deformation parameter, |q| > 1")->required();
    add_global_flags(zeta_cmd, g);

    auto* table_cmd = app.add_subcommand("table", "tabulate values over a grid");
    std::string table_kind, table_comp, table_grid, table_z;
    int j_lo = 4, j_hi = 12;
    table_cmd->add_option("--kind", table_kind, "table kind")
        ->check(CLI::IsMember({"qmzv_grid", "limit_sweep"}))
        ->required();
    table_cmd->add_option("--comp", table_comp, "composition")->required();
    table_cmd->add_option("--q-grid", table_grid, "qmzv_grid: ';' separated q values");
    table_cmd->add_option("--z", table_z, "limit_sweep: argument");
    table_cmd->add_option("--j-lo", j_lo, "limit_sweep: first exponent of q = 1 - 2^-j");
    table_cmd->add_option("--j-hi", j_hi, "limit_sweep: last exponent");
    add_global_flags(table_cmd, g);

    auto* verify_cmd = app.add_subcommand("verify", "run seeded relation suites");
    std::string suite = "all";
    long count = 25;
    verify_cmd->add_option("--suite", suite, "suite name or 'all'");
    verify_cmd->add_option("--count", count, "cases per suite");
    add_global_flags(verify_cmd, g);

    auto* closure_cmd = app.add_subcommand("closure", "solve an ordered product closure");
    std::string a_comp = "1", a_slots = "1", b_comp = "1", b_slots = "2";
    long degree_cap = 12;
    int catalog_weight = 0;
    closure_cmd->add_option("--a-comp", a_comp, "first factor composition");
    closure_cmd->add_option("--a-slots", a_slots,
                            "first factor slots, ';' separated, ',' merges");
    closure_cmd->add_option("--b-comp", b_comp, "second factor composition");
    closure_cmd->add_option("--b-slots", b_slots, "second factor slots");
    closure_cmd->add_option("--degree-cap", degree_cap, "matching degree cap");
    closure_cmd->add_option("--catalog", catalog_weight,
                            "emit all increasing depth-1 pairs up to this total weight");
    add_global_flags(closure_cmd, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(eval_kind, eval_comp, eval_z, eval_q, g);
        if (zeta_cmd->parsed()) return run_eval("qmzv", zeta_comp, "", zeta_q, g);
        if (table_cmd->parsed())
            return run_table(table_kind, table_comp, table_grid, table_z, j_lo, j_hi, g);
        if (verify_cmd->parsed()) return run_verify(suite, count, g);
        if (closure_cmd->parsed())
            return run_closure(a_comp, a_slots, b_comp, b_slots, degree_cap,
                               catalog_weight, g);
    } catch (const qmpl::error& e) {
        json err;
        err["error"]["code"] = errc_name(e.code());
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        json err;
        err["error"]["code"] = "internal";
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return exit_error;
    }
    return exit_usage;
}
