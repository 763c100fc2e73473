#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmpl/scalar.hpp"

namespace qmpl {

using json = nlohmann::json;

enum class Verdict { exact_pass, tolerance_pass, fail, unsupported };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::exact_pass:     return "ExactPass";
    case Verdict::tolerance_pass: return "TolerancePass";
    case Verdict::fail:           return "Fail";
    case Verdict::unsupported:    return "Unsupported";
    }
    return "Unsupported";
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// How far apart two sides of a relation ended up. exact_zero is only ever
// set by exact arithmetic; a float difference that happens to print as
// zero still goes through the tolerance path.
struct Deviation {
    bool exact_zero = false;
    double value = 0.0;

    std::string display() const {
        return exact_zero ? std::string("0 (exact)") : format_double(value);
    }

    json to_json() const {
        json j;
        j["exact_zero"] = exact_zero;
        if (!exact_zero) j["value"] = format_double(value);
        return j;
    }
};

inline Deviation deviation_between(const Scalar& lhs, const Scalar& rhs) {
    Deviation d;
    if (lhs.mode() == ScalarMode::exact && rhs.mode() == ScalarMode::exact) {
        d.exact_zero = (lhs == rhs);
        if (!d.exact_zero) d.value = abs_approx(lhs - rhs);
    } else {
        d.value = abs_approx(lhs - rhs);
    }
    return d;
}

inline Verdict decide_verdict(const Deviation& d, double tail_budget) {
    if (d.exact_zero) return Verdict::exact_pass;
    return d.value <= tail_budget ? Verdict::tolerance_pass : Verdict::fail;
}

namespace detail {

// Forward rounding-error envelope for a truncated evaluation in float
// mode: machine epsilon at the working precision, times the summed term
// magnitudes, times a generous per-term operation factor. Exact mode
// contributes nothing.
inline double rounding_budget(long prec_bits, double abs_majorant, int depth, long K) {
    if (prec_bits <= 0) return 0.0;
    double eps = std::ldexp(1.0, static_cast<int>(1 - prec_bits));
    double ops = 8.0 * (static_cast<double>(depth) + 1.0) * (static_cast<double>(K) + 1.0) + 64.0;
    return eps * ops * std::max(abs_majorant, 1.0);
}

} // namespace detail

struct VerificationReport {
    std::string relation_id;
    json parameters = json::object();
    std::string lhs;
    std::string rhs;
    Deviation deviation;
    double tail_budget = 0.0;
    Verdict verdict = Verdict::unsupported;
    json details; // optional, null when absent

    json to_json() const {
        json j;
        j["relation_id"] = relation_id;
        j["parameters"] = parameters;
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["deviation"] = deviation.to_json();
        j["tail_budget"] = format_double(tail_budget);
        j["verdict"] = verdict_name(verdict);
        if (!details.is_null()) j["details"] = details;
        return j;
    }

    bool passed() const {
        return verdict == Verdict::exact_pass || verdict == Verdict::tolerance_pass;
    }
};

// RFC 4180: quote fields containing separators, double embedded quotes,
// CRLF record ends.
inline std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += "\r\n";
    return out;
}

inline std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
    std::string out = csv_row({"relation_id", "verdict", "deviation", "tail_budget",
                               "lhs", "rhs", "parameters"});
    for (const auto& r : reports)
        out += csv_row({r.relation_id, verdict_name(r.verdict), r.deviation.display(),
                        format_double(r.tail_budget), r.lhs, r.rhs, r.parameters.dump()});
    return out;
}

inline json reports_to_json(const std::vector<VerificationReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    return arr;
}

} // namespace qmpl
