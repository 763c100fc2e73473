#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qmpl/eval.hpp"
#include "qmpl/report.hpp"

namespace qmpl {

// One depth slot of a series symbol: the exponent on the denominator and
// the argument. The argument is kept as a formal product of scalars and
// only multiplied out at evaluation time, so merged letters stay exact
// regardless of scalar mode.
struct StuffleLetter {
    int index = 1;
    std::vector<Scalar> args; // sorted; the slot argument is their product

    std::string to_string() const {
        std::string s = "(" + std::to_string(index) + ";";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += "*";
            s += args[i].to_string();
        }
        return s + ")";
    }
};

inline StuffleLetter make_letter(int index, std::vector<Scalar> args) {
    require(index >= 1, errc::invalid_parameter, "letter index must be >= 1");
    require(!args.empty(), errc::invalid_parameter, "letter needs an argument");
    std::sort(args.begin(), args.end(), ScalarLess{});
    return StuffleLetter{index, std::move(args)};
}

inline StuffleLetter merge_letters(const StuffleLetter& a, const StuffleLetter& b) {
    std::vector<Scalar> args = a.args;
    args.insert(args.end(), b.args.begin(), b.args.end());
    return make_letter(a.index + b.index, std::move(args));
}

inline bool letter_less(const StuffleLetter& a, const StuffleLetter& b) {
    if (a.index != b.index) return a.index < b.index;
    return std::lexicographical_compare(a.args.begin(), a.args.end(),
                                        b.args.begin(), b.args.end(), ScalarLess{});
}

inline bool letter_eq(const StuffleLetter& a, const StuffleLetter& b) {
    return !letter_less(a, b) && !letter_less(b, a);
}

// A single series symbol: one letter per depth slot.
struct IndexedWord {
    std::vector<StuffleLetter> letters;

    int depth() const { return static_cast<int>(letters.size()); }

    Composition composition() const {
        std::vector<int> n;
        for (const auto& l : letters) n.push_back(l.index);
        return Composition(std::move(n));
    }

    std::vector<Scalar> arguments() const {
        std::vector<Scalar> z;
        for (const auto& l : letters) {
            Scalar acc = l.args.front();
            for (size_t i = 1; i < l.args.size(); ++i) acc *= l.args[i];
            z.push_back(acc);
        }
        return z;
    }

    std::string to_string() const {
        std::string s;
        for (const auto& l : letters) s += l.to_string();
        return s;
    }
};

inline IndexedWord make_word(const Composition& comp, const std::vector<Scalar>& z) {
    require(comp.depth() == static_cast<int>(z.size()), errc::invalid_parameter,
            "argument count does not match composition depth");
    IndexedWord w;
    for (int j = 0; j < comp.depth(); ++j)
        w.letters.push_back(make_letter(comp[j], {z[static_cast<size_t>(j)]}));
    return w;
}

struct IndexedWordLess {
    bool operator()(const IndexedWord& a, const IndexedWord& b) const {
        return std::lexicographical_compare(a.letters.begin(), a.letters.end(),
                                            b.letters.begin(), b.letters.end(),
                                            letter_less);
    }
};

// Finite rational-coefficient combination of series symbols, kept
// canonical: like words merged, zero coefficients dropped.
class QMPLExpr {
  public:
    using Terms = std::map<IndexedWord, Rational, IndexedWordLess>;

    void add(const IndexedWord& w, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void add(const QMPLExpr& other, const Rational& scale = Rational(1)) {
        for (const auto& [w, c] : other.terms_) add(w, c * scale);
    }

    const Terms& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }

    friend bool operator==(const QMPLExpr& a, const QMPLExpr& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
            if (letter_count_mismatch(ia->first, ib->first) || ia->second != ib->second)
                return false;
        }
        return true;
    }
    friend bool operator!=(const QMPLExpr& a, const QMPLExpr& b) { return !(a == b); }

    std::string to_string() const {
        std::string s;
        for (const auto& [w, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += qmpl::to_string(c) + "*" + w.to_string();
        }
        return s.empty() ? "0" : s;
    }

  private:
    static bool letter_count_mismatch(const IndexedWord& a, const IndexedWord& b) {
        IndexedWordLess less;
        return less(a, b) || less(b, a);
    }

    Terms terms_;
};

namespace detail {

inline QMPLExpr prepend(const StuffleLetter& head, const QMPLExpr& tail) {
    QMPLExpr out;
    for (const auto& [w, c] : tail.terms()) {
        IndexedWord nw;
        nw.letters.reserve(w.letters.size() + 1);
        nw.letters.push_back(head);
        nw.letters.insert(nw.letters.end(), w.letters.begin(), w.letters.end());
        out.add(nw, c);
    }
    return out;
}

inline QMPLExpr stuffle_rec(const std::vector<StuffleLetter>& u, size_t i,
                            const std::vector<StuffleLetter>& v, size_t j) {
    QMPLExpr out;
    if (i == u.size() && j == v.size()) {
        out.add(IndexedWord{}, Rational(1));
        return out;
    }
    if (i == u.size()) {
        IndexedWord rest{{v.begin() + static_cast<long>(j), v.end()}};
        out.add(rest, Rational(1));
        return out;
    }
    if (j == v.size()) {
        IndexedWord rest{{u.begin() + static_cast<long>(i), u.end()}};
        out.add(rest, Rational(1));
        return out;
    }
    out.add(prepend(u[i], stuffle_rec(u, i + 1, v, j)));
    out.add(prepend(v[j], stuffle_rec(u, i, v, j + 1)));
    out.add(prepend(merge_letters(u[i], v[j]), stuffle_rec(u, i + 1, v, j + 1)));
    return out;
}

} // namespace detail

// Quasi-shuffle expansion of a product of two series symbols: sum over
// order-preserving interleavings of the index chains, where two letters
// landing on a shared summation index merge into one letter with indices
// added and arguments multiplied. Exact because the q-weights satisfy
// (1-q^k)^(-n) * (1-q^k)^(-n') = (1-q^k)^(-n-n').
inline QMPLExpr stuffle_product(const IndexedWord& a, const IndexedWord& b) {
    require(a.depth() >= 1 && b.depth() >= 1, errc::invalid_parameter,
            "stuffle factors must be non-empty words");
    return detail::stuffle_rec(a.letters, 0, b.letters, 0);
}

inline EvalResult eval_word(const IndexedWord& w, const QParam& q,
                            const TruncationSpec& trunc) {
    return eval_qmpl(w.composition(), w.arguments(), q, trunc);
}

// Numeric check of the quasi-shuffle identity, all sides truncated at the
// same outer cutoff K. The product grid [1..K]^2 is exactly partitioned
// by the triangle decomposition, so exact mode must give deviation 0.
inline VerificationReport verify_stuffle_numeric(const IndexedWord& a,
                                                 const IndexedWord& b, const QParam& q,
                                                 const TruncationSpec& trunc) {
    TruncationSpec inner{trunc.K, TailMethod::none};
    EvalResult ra = eval_word(a, q, inner);
    EvalResult rb = eval_word(b, q, inner);
    Scalar lhs = ra.value * rb.value;

    QMPLExpr expansion = stuffle_product(a, b);
    long prec = q.q().precision_bits() > 0
                    ? detail::working_precision(a.arguments(), q.q())
                    : 0;
    Scalar rhs = Scalar::exact_long(0).to_mode(q.mode(), std::max<long>(prec, 53));
    double rhs_majorant = 0.0;
    int max_depth = 0;
    for (const auto& [w, c] : expansion.terms()) {
        EvalResult rt = eval_word(w, q, inner);
        Scalar coeff = Scalar::exact(c).to_mode(q.mode(), std::max<long>(prec, 53));
        rhs += coeff * rt.value;
        rhs_majorant += std::abs(to_double(c)) * rt.abs_majorant;
        max_depth = std::max(max_depth, w.depth());
    }

    VerificationReport rep;
    rep.relation_id = "stuffle";
    rep.parameters["a"] = a.to_string();
    rep.parameters["b"] = b.to_string();
    rep.parameters["q"] = q.q().to_string();
    rep.parameters["K"] = trunc.K;
    rep.parameters["terms"] = expansion.size();
    rep.lhs = lhs.to_string();
    rep.rhs = rhs.to_string();
    rep.deviation = deviation_between(lhs, rhs);
    if (q.mode() == ScalarMode::floating) {
        double lhs_majorant = ra.abs_majorant * rb.abs_majorant;
        rep.tail_budget = detail::rounding_budget(prec, lhs_majorant + rhs_majorant,
                                                  max_depth, trunc.K);
    }
    rep.verdict = decide_verdict(rep.deviation, rep.tail_budget);
    return rep;
}

} // namespace qmpl
