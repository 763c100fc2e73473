#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qmpl/formal_series.hpp"
#include "qmpl/report.hpp"

namespace qmpl {

// One ordered series factor: exponents and slot variable multisets. An
// empty factor is the unit series.
struct OrderedFactor {
    std::vector<int> n;
    std::vector<SlotSet> slots;

    bool is_unit() const { return n.empty(); }
    int depth() const { return static_cast<int>(n.size()); }
    int weight() const {
        int w = 0;
        for (int k : n) w += k;
        return w;
    }

    void validate() const {
        require(n.size() == slots.size(), errc::invalid_parameter,
                "slot count does not match composition depth");
        for (int k : n)
            require(k >= 1, errc::invalid_parameter, "composition entries must be >= 1");
        for (const auto& s : slots)
            require(!s.empty() && std::is_sorted(s.begin(), s.end()),
                    errc::invalid_parameter, "slots must be sorted and non-empty");
    }

    std::string to_string() const {
        if (is_unit()) return "1";
        std::string s = "Li_(";
        for (size_t i = 0; i < n.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(n[i]);
        }
        s += ")[";
        for (size_t i = 0; i < slots.size(); ++i) {
            if (i) s += ";";
            for (size_t j = 0; j < slots[i].size(); ++j) {
                if (j) s += "*";
                s += "z" + std::to_string(slots[i][j]);
            }
        }
        return s + "]";
    }

    json to_json() const {
        json j;
        j["comp"] = n;
        j["slots"] = slots;
        return j;
    }

    friend auto operator<=>(const OrderedFactor&, const OrderedFactor&) = default;
};

inline OrderedFactor depth1_factor(int weight, std::uint32_t var) {
    return OrderedFactor{{weight}, {{var}}};
}

inline FormalSeries factor_series(const OrderedFactor& f, long degree_cap) {
    f.validate();
    if (f.is_unit()) return FormalSeries::unit(degree_cap);
    return ordered_qmpl_series(Composition(f.n), f.slots, degree_cap);
}

struct ClosureTerm {
    OrderedFactor factor;
    QRatio coefficient;
};

struct ClosureResult {
    bool closed = false;
    std::string ring; // "Q" when constants suffice, else "Q[q,1/q]"
    std::vector<ClosureTerm> terms;
    long degree_cap = 0;
    std::string reason; // non-empty when closed is false

    json to_json() const {
        json j;
        j["closed"] = closed;
        j["degree_cap"] = degree_cap;
        if (closed) {
            j["ring"] = ring;
            json terms_json = json::array();
            for (const auto& t : terms) {
                json tj = t.factor.to_json();
                tj["coefficient"] = t.coefficient.to_json();
                terms_json.push_back(tj);
            }
            j["terms"] = terms_json;
        } else {
            j["reason"] = reason;
        }
        return j;
    }
};

namespace detail {

inline SlotSet merge_slots(const SlotSet& a, const SlotSet& b) {
    SlotSet out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Order-preserving interleavings of the two slot sequences, with
// optional pairwise merges (the quasi-shuffle patterns).
inline void slot_patterns(const std::vector<SlotSet>& a, size_t i,
                          const std::vector<SlotSet>& b, size_t j,
                          std::vector<SlotSet>& acc,
                          std::set<std::vector<SlotSet>>& out) {
    if (i == a.size() && j == b.size()) {
        out.insert(acc);
        return;
    }
    if (i < a.size()) {
        acc.push_back(a[i]);
        slot_patterns(a, i + 1, b, j, acc, out);
        acc.pop_back();
    }
    if (j < b.size()) {
        acc.push_back(b[j]);
        slot_patterns(a, i, b, j + 1, acc, out);
        acc.pop_back();
    }
    if (i < a.size() && j < b.size()) {
        acc.push_back(merge_slots(a[i], b[j]));
        slot_patterns(a, i + 1, b, j + 1, acc, out);
        acc.pop_back();
    }
}

inline void compositions_of(int weight, int parts, std::vector<int>& acc,
                            std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        if (weight >= 1) {
            acc.push_back(weight);
            out.push_back(acc);
            acc.pop_back();
        }
        return;
    }
    for (int first = 1; first <= weight - (parts - 1); ++first) {
        acc.push_back(first);
        compositions_of(weight - first, parts - 1, acc, out);
        acc.pop_back();
    }
}

// Candidate basis for the closure solve: every composition of the total
// weight distributed over every quasi-shuffle slot pattern.
inline std::vector<OrderedFactor> closure_candidates(const OrderedFactor& a,
                                                     const OrderedFactor& b) {
    std::set<std::vector<SlotSet>> patterns;
    std::vector<SlotSet> acc;
    slot_patterns(a.slots, 0, b.slots, 0, acc, patterns);

    int W = a.weight() + b.weight();
    std::set<OrderedFactor> cands;
    for (const auto& pat : patterns) {
        std::vector<std::vector<int>> comps;
        std::vector<int> cacc;
        compositions_of(W, static_cast<int>(pat.size()), cacc, comps);
        for (auto& c : comps) cands.insert(OrderedFactor{c, pat});
    }
    return {cands.begin(), cands.end()};
}

// Exact Gaussian elimination for A x = rhs over the rationals. Returns
// false on inconsistency; free variables are set to zero.
inline bool solve_rational_system(std::vector<std::vector<Rational>> A,
                                  std::vector<Rational> rhs,
                                  std::vector<Rational>& x, size_t unknowns) {
    size_t rows = A.size();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < unknowns && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        std::swap(rhs[piv], rhs[r]);
        Rational inv = Rational(1) / A[r][c];
        for (size_t cc = c; cc < unknowns; ++cc) A[r][cc] *= inv;
        rhs[r] *= inv;
        for (size_t rr = 0; rr < rows; ++rr) {
            if (rr == r || A[rr][c] == 0) continue;
            Rational f = A[rr][c];
            for (size_t cc = c; cc < unknowns; ++cc) A[rr][cc] -= f * A[r][cc];
            rhs[rr] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t rr = r; rr < rows; ++rr)
        if (rhs[rr] != 0) return false;

    x.assign(unknowns, Rational(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = rhs[i];
    return true;
}

} // namespace detail

// Tries to express the product of two ordered series as a linear
// combination of candidate ordered series, exactly, coefficient by
// coefficient in the rational functions of q. Constants are attempted
// first; if they cannot work, coefficients are allowed to be Laurent
// polynomials in q over a bounded exponent window, and the result
// records which ring was needed. Failure is reported, not thrown: the
// ordered algebra genuinely does not close for some slot orders.
inline ClosureResult solve_ordered_closure(const OrderedFactor& a, const OrderedFactor& b,
                                           long degree_cap) {
    a.validate();
    b.validate();
    ClosureResult res;
    res.degree_cap = degree_cap;

    if (a.is_unit() || b.is_unit()) {
        res.closed = true;
        res.ring = "Q";
        if (!(a.is_unit() && b.is_unit())) {
            const OrderedFactor& other = a.is_unit() ? b : a;
            res.terms.push_back({other, QRatio::from_rational(Rational(1))});
        }
        return res;
    }

    FormalSeries A = factor_series(a, degree_cap);
    FormalSeries B = factor_series(b, degree_cap);
    require(!A.is_zero() && !B.is_zero(), errc::invalid_parameter,
            "degree cap too small to see either factor");
    FormalSeries P = multiply_series(A, B);

    std::vector<OrderedFactor> cands = detail::closure_candidates(a, b);
    std::vector<FormalSeries> cand_series;
    cand_series.reserve(cands.size());
    std::set<MonomialKey> keys;
    for (const auto& [k, c] : P.terms()) keys.insert(k);
    for (const auto& cand : cands) {
        cand_series.push_back(factor_series(cand, degree_cap));
        for (const auto& [k, c] : cand_series.back().terms()) keys.insert(k);
    }

    const std::vector<Rational> sample_pool = {
        Rational(2),  Rational(3),  Rational(5),  Rational(7),  Rational(11),
        Rational(13), Rational(17), Rational(19), Rational(23), Rational(29),
        Rational(31), Rational(37), Rational(41), Rational(43), Rational(47)};

    size_t nc = cands.size();

    auto build_rows = [&](size_t samples, int window,
                          std::vector<std::vector<Rational>>& Amat,
                          std::vector<Rational>& rhs) {
        size_t per_cand = static_cast<size_t>(2 * window + 1);
        size_t unknowns = nc * per_cand;
        for (size_t s = 0; s < samples; ++s) {
            const Rational& t = sample_pool[s];
            std::vector<Rational> tpow(per_cand);
            for (int e = -window; e <= window; ++e)
                tpow[static_cast<size_t>(e + window)] = pow_int(t, e);
            for (const auto& key : keys) {
                std::vector<Rational> row(unknowns, Rational(0));
                for (size_t c = 0; c < nc; ++c) {
                    QRatio qc = cand_series[c].coefficient(key);
                    if (qc.is_zero()) continue;
                    Rational base = qc.specialize(t);
                    for (size_t e = 0; e < per_cand; ++e)
                        row[c * per_cand + e] = base * tpow[e];
                }
                Amat.push_back(std::move(row));
                rhs.push_back(P.coefficient(key).specialize(t));
            }
        }
        return unknowns;
    };

    auto verify_symbolically = [&](const std::vector<LaurentPoly>& coeffs) {
        for (const auto& key : keys) {
            QRatio acc;
            for (size_t c = 0; c < nc; ++c) {
                if (coeffs[c].is_zero()) continue;
                QRatio qc = cand_series[c].coefficient(key);
                if (qc.is_zero()) continue;
                acc = acc + qc.scaled_by_poly(coeffs[c]);
            }
            if (acc != P.coefficient(key)) return false;
        }
        return true;
    };

    auto finish = [&](const std::vector<LaurentPoly>& coeffs) {
        res.closed = true;
        bool all_const = true;
        for (size_t c = 0; c < nc; ++c) {
            if (coeffs[c].is_zero()) continue;
            if (!coeffs[c].is_constant()) all_const = false;
            res.terms.push_back({cands[c], QRatio::from_poly(coeffs[c])});
        }
        res.ring = all_const ? "Q" : "Q[q,1/q]";
    };

    // stage one: rational-constant coefficients
    for (size_t samples : {3u, 6u}) {
        std::vector<std::vector<Rational>> Amat;
        std::vector<Rational> rhs;
        build_rows(samples, 0, Amat, rhs);
        std::vector<Rational> x;
        if (!detail::solve_rational_system(std::move(Amat), std::move(rhs), x, nc)) break;
        std::vector<LaurentPoly> coeffs;
        coeffs.reserve(nc);
        for (size_t c = 0; c < nc; ++c) coeffs.push_back(LaurentPoly::constant(x[c]));
        if (verify_symbolically(coeffs)) {
            finish(coeffs);
            return res;
        }
    }

    // stage two: Laurent coefficients over a bounded exponent window
    int window = a.weight() * b.weight();
    size_t samples = std::min(sample_pool.size(), static_cast<size_t>(2 * window + 3));
    std::vector<std::vector<Rational>> Amat;
    std::vector<Rational> rhs;
    size_t unknowns = build_rows(samples, window, Amat, rhs);
    std::vector<Rational> x;
    if (detail::solve_rational_system(std::move(Amat), std::move(rhs), x, unknowns)) {
        std::vector<LaurentPoly> coeffs;
        size_t per_cand = static_cast<size_t>(2 * window + 1);
        for (size_t c = 0; c < nc; ++c) {
            LaurentPoly p;
            for (int e = -window; e <= window; ++e)
                p = p + LaurentPoly::q_power(e, x[c * per_cand + static_cast<size_t>(e + window)]);
            coeffs.push_back(p);
        }
        if (verify_symbolically(coeffs)) {
            finish(coeffs);
            return res;
        }
    }

    res.closed = false;
    res.reason = "no candidate combination reproduces the product up to degree " +
                 std::to_string(degree_cap) + " (Laurent exponent window " +
                 std::to_string(window) + ")";
    return res;
}

inline VerificationReport verify_ordered_closure(const OrderedFactor& a,
                                                 const OrderedFactor& b,
                                                 long degree_cap) {
    ClosureResult res = solve_ordered_closure(a, b, degree_cap);

    VerificationReport rep;
    rep.relation_id = "ordered_closure";
    rep.parameters["a"] = a.to_json();
    rep.parameters["b"] = b.to_json();
    rep.parameters["degree_cap"] = degree_cap;
    rep.lhs = a.to_string() + " * " + b.to_string();
    if (res.closed) {
        std::string combo;
        for (const auto& t : res.terms) {
            if (!combo.empty()) combo += " + ";
            combo += "[" + t.coefficient.to_string() + "] " + t.factor.to_string();
        }
        rep.rhs = combo.empty() ? "1" : combo;
        rep.deviation.exact_zero = true;
        rep.verdict = Verdict::exact_pass;
    } else {
        rep.rhs = "(no combination)";
        rep.deviation.exact_zero = false;
        rep.deviation.value = 1.0;
        rep.verdict = Verdict::fail;
    }
    rep.details = res.to_json();
    return rep;
}

} // namespace qmpl
