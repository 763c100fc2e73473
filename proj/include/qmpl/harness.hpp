#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qmpl/closure.hpp"
#include "qmpl/distribution.hpp"
#include "qmpl/relations.hpp"
#include "qmpl/stuffle.hpp"
#include "qmpl/zetaword.hpp"

namespace qmpl {

enum class OutputFormat { json, csv };

inline const char* format_name(OutputFormat f) {
    return f == OutputFormat::json ? "json" : "csv";
}

inline OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    fail(errc::invalid_parameter, "unknown output format: " + s);
}

inline ScalarMode parse_mode(const std::string& s) {
    if (s == "exact") return ScalarMode::exact;
    if (s == "float") return ScalarMode::floating;
    fail(errc::invalid_parameter, "unknown scalar mode: " + s);
}

// Run-wide knobs. The seed fully determines every generated parameter
// set, which is what makes suite outputs reproducible byte for byte.
struct RunConfig {
    ScalarMode mode = ScalarMode::exact;
    long precision_bits = 128;
    long K = 40;
    long lattice_cap = 4096;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::json;

    void validate() const {
        require(precision_bits >= BigFloat::min_precision, errc::invalid_parameter,
                "precision below " + std::to_string(BigFloat::min_precision) + " bits");
        require(K >= 0, errc::invalid_parameter, "negative truncation bound");
        require(lattice_cap >= 1, errc::invalid_parameter, "lattice cap must be >= 1");
    }

    json to_json() const {
        json j;
        j["mode"] = mode_name(mode);
        j["precision_bits"] = precision_bits;
        j["K"] = K;
        j["lattice_cap"] = lattice_cap;
        j["seed"] = seed;
        j["format"] = format_name(format);
        return j;
    }

    static RunConfig from_json(const json& j) {
        RunConfig c;
        if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<long>();
        if (j.contains("K")) c.K = j.at("K").get<long>();
        if (j.contains("lattice_cap")) c.lattice_cap = j.at("lattice_cap").get<long>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
        c.validate();
        return c;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        require(in.good(), errc::io_error, "cannot open config file: " + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            fail(errc::parse_error, "config file " + path + ": " + e.what());
        }
        return from_json(j);
    }

    // Defaults, unless the environment points at a config file.
    static RunConfig from_environment() {
        const char* path = std::getenv("QMPL_CONFIG");
        if (path != nullptr && *path != '\0') return load(path);
        return RunConfig{};
    }
};

inline Scalar config_scalar(const Rational& r, const RunConfig& cfg) {
    if (cfg.mode == ScalarMode::exact) return Scalar::exact(r);
    return Scalar::floating_real(BigFloat::from_rational(r, cfg.precision_bits));
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace detail

// Deterministic per-case parameter source. Each (seed, suite, index)
// triple owns an independent stream, so inserting or reordering cases
// never disturbs the parameters of the others. Sampling uses explicit
// rejection on raw engine output; the standard distributions are not
// pinned down by the standard and would break cross-build determinism.
class ParamGen {
  public:
    ParamGen(std::uint64_t seed, std::string_view suite, std::uint64_t index) {
        std::uint64_t h = detail::fnv1a(suite);
        std::seed_seq sq{static_cast<std::uint32_t>(seed),
                         static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(h),
                         static_cast<std::uint32_t>(h >> 32),
                         static_cast<std::uint32_t>(index),
                         static_cast<std::uint32_t>(index >> 32)};
        eng_.seed(sq);
    }

    std::uint64_t u64() { return eng_(); }

    // inclusive bounds
    long uniform(long lo, long hi) {
        require(lo <= hi, errc::invalid_parameter, "empty sampling range");
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<long>(u64()); // full 64-bit span
        std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x = u64();
        while (x >= limit) x = u64();
        return lo + static_cast<long>(x % range);
    }

    bool coin() { return uniform(0, 1) == 1; }

    // nonzero, |r| <= 1/2, denominator <= 12
    Rational half_unit_rational() {
        long den = uniform(2, 12);
        long num = uniform(1, std::max<long>(den / 2, 1));
        return make_rational(coin() ? num : -num, den);
    }

    // in (0, 1]
    Rational positive_unit_rational() {
        long den = uniform(1, 12);
        return make_rational(uniform(1, den), den);
    }

    Composition composition(int max_depth, int max_weight) {
        int d = static_cast<int>(uniform(1, std::min(max_depth, max_weight)));
        std::vector<int> n;
        int remaining = max_weight;
        for (int j = 0; j < d; ++j) {
            int slots_left = d - j - 1;
            int e = static_cast<int>(uniform(1, remaining - slots_left));
            n.push_back(e);
            remaining -= e;
        }
        return Composition(std::move(n));
    }

  private:
    std::mt19937_64 eng_;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "symmetry", "derivative", "distribution", "limit",
        "integral", "ordered_closure", "exchange"};
    return names;
}

namespace detail {

inline std::string case_label(std::string_view suite, long index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04ld", index);
    return std::string(suite) + "-" + buf;
}

inline VerificationReport run_symmetry_case(ParamGen& g, const RunConfig& cfg) {
    auto word = [&]() {
        Composition comp = g.composition(2, 4);
        std::vector<Scalar> z;
        for (int j = 0; j < comp.depth(); ++j)
            z.push_back(config_scalar(g.half_unit_rational(), cfg));
        return make_word(comp, z);
    };
    IndexedWord a = word();
    IndexedWord b = word();
    QParam q = QParam::make(config_scalar(g.half_unit_rational(), cfg));
    return verify_stuffle_numeric(a, b, q, TruncationSpec{cfg.K, TailMethod::none});
}

inline VerificationReport run_derivative_case(ParamGen& g, const RunConfig& cfg) {
    Composition comp = g.composition(3, 6);
    int slot = static_cast<int>(g.uniform(1, comp.depth()));
    std::vector<Scalar> z;
    for (int j = 0; j < comp.depth(); ++j)
        z.push_back(config_scalar(g.half_unit_rational(), cfg));
    QParam q = QParam::make(config_scalar(g.half_unit_rational(), cfg));
    return check_derivative_relation(comp, slot, z, q,
                                     TruncationSpec{cfg.K, TailMethod::none});
}

inline VerificationReport run_distribution_case(ParamGen& g, const RunConfig& cfg) {
    Composition comp = g.coin() ? Composition({2}) : Composition({1, 1});
    // cube roots leave the rationals, so exact runs stay at n <= 2
    int n = static_cast<int>(
        g.uniform(1, cfg.mode == ScalarMode::exact ? 2 : 3));
    std::vector<Scalar> x;
    for (int j = 0; j < comp.depth(); ++j) {
        Rational r = g.half_unit_rational();
        if (n == 2) r *= r; // keep the square root rational
        x.push_back(config_scalar(r, cfg));
    }
    QParam q = QParam::make(config_scalar(g.half_unit_rational(), cfg));
    DistributionRelation rel = distribution_expand(comp, x, n);
    return verify_distribution(rel, q, cfg.K);
}

inline VerificationReport run_limit_case(ParamGen& g, const RunConfig& cfg) {
    Composition comp = g.composition(2, 3);
    std::vector<Scalar> z;
    for (int j = 0; j < comp.depth(); ++j)
        z.push_back(config_scalar(g.half_unit_rational(), cfg));
    std::vector<QParam> qs;
    for (int j = 4; j <= 8; ++j) {
        Rational qr = Rational(1) - pow_int(make_rational(1, 2), j);
        qs.push_back(QParam::make(config_scalar(qr, cfg)));
    }
    LimitOptions opt;
    opt.settle = 1;
    return classical_limit_check(comp, z, qs, TruncationSpec{cfg.K, TailMethod::none}, opt);
}

inline VerificationReport run_integral_case(ParamGen& g, const RunConfig& cfg) {
    Rational c = g.half_unit_rational();
    int m = static_cast<int>(g.uniform(0, 4));
    Scalar a = config_scalar(g.positive_unit_rational(), cfg);
    Rational qr = g.half_unit_rational();
    if (qr < 0) qr = -qr;
    QParam q = QParam::make(config_scalar(qr, cfg));
    long cap = std::min<long>(cfg.lattice_cap, 256);
    return check_jackson_fundamental(c, m, a, q, cap);
}

inline VerificationReport run_closure_case(ParamGen& g, const RunConfig& cfg) {
    (void)cfg; // the closure solve is symbolic; mode and K do not enter
    OrderedFactor a;
    if (g.coin()) {
        a = OrderedFactor{{static_cast<int>(g.uniform(1, 2)),
                           static_cast<int>(g.uniform(1, 2))},
                          {{1}, {2}}};
    } else {
        a = depth1_factor(static_cast<int>(g.uniform(1, 3)), 1);
    }
    std::uint32_t next_var = static_cast<std::uint32_t>(a.slots.size()) + 1;
    OrderedFactor b = depth1_factor(static_cast<int>(g.uniform(1, 3)), next_var);
    return verify_ordered_closure(a, b, 8);
}

inline VerificationReport run_exchange_case(ParamGen& g, const RunConfig& cfg) {
    (void)cfg;
    ZetaWord w;
    long len = g.uniform(1, 6);
    for (long i = 0; i < len; ++i)
        w.letters.push_back(g.composition(3, 4));
    return verify_exchange_confluence(w);
}

} // namespace detail

inline std::vector<VerificationReport> run_suite(const std::string& suite, long count,
                                                 const RunConfig& cfg) {
    cfg.validate();
    require(count >= 0, errc::invalid_parameter, "negative case count");
    const auto& names = suite_names();
    require(std::find(names.begin(), names.end(), suite) != names.end(),
            errc::unsupported, "unknown suite: " + suite);

    std::vector<VerificationReport> reports;
    reports.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        ParamGen g(cfg.seed, suite, static_cast<std::uint64_t>(i));
        VerificationReport rep;
        if (suite == "symmetry")
            rep = detail::run_symmetry_case(g, cfg);
        else if (suite == "derivative")
            rep = detail::run_derivative_case(g, cfg);
        else if (suite == "distribution")
            rep = detail::run_distribution_case(g, cfg);
        else if (suite == "limit")
            rep = detail::run_limit_case(g, cfg);
        else if (suite == "integral")
            rep = detail::run_integral_case(g, cfg);
        else if (suite == "ordered_closure")
            rep = detail::run_closure_case(g, cfg);
        else
            rep = detail::run_exchange_case(g, cfg);
        rep.parameters["case"] = detail::case_label(suite, i);
        rep.parameters["mode"] = mode_name(cfg.mode);
        if (cfg.mode == ScalarMode::floating)
            rep.parameters["precision_bits"] = cfg.precision_bits;
        reports.push_back(std::move(rep));
    }

    // canonical order regardless of how cases were produced
    std::sort(reports.begin(), reports.end(),
              [](const VerificationReport& x, const VerificationReport& y) {
                  if (x.relation_id != y.relation_id) return x.relation_id < y.relation_id;
                  return x.parameters.at("case").get<std::string>() <
                         y.parameters.at("case").get<std::string>();
              });
    return reports;
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports)
        if (r.verdict == Verdict::fail) return false;
    return true;
}

inline json suite_output_json(const std::string& suite, long count, const RunConfig& cfg,
                              const std::vector<VerificationReport>& reports) {
    json j;
    j["suite"] = suite;
    j["count"] = count;
    j["config"] = cfg.to_json();
    j["reports"] = reports_to_json(reports);
    return j;
}

// Plain string table, one serialization per output format.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    json to_json() const {
        json j;
        j["columns"] = columns;
        json r = json::array();
        for (const auto& row : rows) r.push_back(row);
        j["rows"] = r;
        return j;
    }

    std::string to_csv() const {
        std::string out = csv_row(columns);
        for (const auto& row : rows) out += csv_row(row);
        return out;
    }
};

// One row per q on the grid: the raw nested sum, the weight rescaling
// (1-q)^w * value that has the classical limit, and the tail bound.
inline Table table_qmzv_grid(const Composition& comp, const std::vector<Scalar>& q_grid,
                             const RunConfig& cfg) {
    cfg.validate();
    Table t;
    t.columns = {"q", "value", "rescaled", "tail_bound", "terms"};
    for (const auto& qs : q_grid) {
        QParam q = QParam::make(qs);
        EvalResult r = eval_qmzv(comp, q, TruncationSpec{cfg.K, TailMethod::geometric});
        long prec = std::max(q.q().precision_bits(), BigFloat::min_precision);
        Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
        Scalar rescaled = pow_int(one - q.q(), comp.weight()) * r.value;
        t.rows.push_back({q.q().to_string(), r.value.to_string(), rescaled.to_string(),
                          r.tail.is_finite() ? format_double(r.tail.value) : "unbounded",
                          std::to_string(r.terms_summed)});
    }
    return t;
}

// Sweep q = 1 - 2^-j toward the classical limit. The deviation column
// compares the rescaled value against a high-cutoff classical reference
// evaluated at 128-bit float precision; it is a diagnostic double, so it
// is reported the same way in both scalar modes.
inline Table table_limit_sweep(const Composition& comp, const Scalar& z, int j_lo,
                               int j_hi, const RunConfig& cfg) {
    cfg.validate();
    Table t;
    t.columns = {"j", "q", "value", "rescaled", "tail_bound", "deviation"};
    if (j_lo > j_hi) return t;
    require(j_lo >= 1, errc::invalid_parameter, "sweep exponent must be >= 1");

    long ref_prec = std::max<long>(cfg.precision_bits, 128);
    std::vector<Scalar> zf = {z.to_mode(ScalarMode::floating, ref_prec)};
    long ref_K = std::max<long>(cfg.K, 2000);
    EvalResult ref =
        eval_classical_mpl(comp, zf, TruncationSpec{ref_K, TailMethod::geometric});

    for (int j = j_lo; j <= j_hi; ++j) {
        Rational qr = Rational(1) - pow_int(make_rational(1, 2), j);
        QParam q = QParam::make(config_scalar(qr, cfg));
        std::vector<Scalar> zz = {cfg.mode == ScalarMode::exact
                                      ? z
                                      : z.to_mode(ScalarMode::floating, cfg.precision_bits)};
        EvalResult r = eval_qmpl(comp, zz, q, TruncationSpec{cfg.K, TailMethod::geometric});
        long prec = std::max(q.q().precision_bits(), BigFloat::min_precision);
        Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
        Scalar rescaled = pow_int(one - q.q(), comp.weight()) * r.value;
        double dev = abs_approx(rescaled.to_mode(ScalarMode::floating, ref_prec) - ref.value);
        t.rows.push_back({std::to_string(j), q.q().to_string(), r.value.to_string(),
                          rescaled.to_string(),
                          r.tail.is_finite() ? format_double(r.tail.value) : "unbounded",
                          format_double(dev)});
    }
    return t;
}

} // namespace qmpl
