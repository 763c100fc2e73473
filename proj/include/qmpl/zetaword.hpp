#pragma once

#include <string>
#include <vector>

#include "qmpl/composition.hpp"
#include "qmpl/report.hpp"

namespace qmpl {

// Canonical order on word letters: lighter compositions first, ties
// broken lexicographically on the index entries.
inline bool zeta_letter_less(const Composition& a, const Composition& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.indices() < b.indices();
}

// A formal word in zeta letters with a Laurent monomial prefactor q^e.
// Adjacent letters exchange at the cost of a q power: moving a heavier
// letter right past a strictly lighter one multiplies the word by
// q^(-wa*wb), where wa and wb are the two letter weights. Equal letters
// commute freely.
struct ZetaWord {
    long q_exponent = 0;
    std::vector<Composition> letters;

    bool operator==(const ZetaWord&) const = default;

    std::string to_string() const {
        std::string s;
        if (q_exponent != 0) s += "q^" + std::to_string(q_exponent) + " ";
        if (letters.empty()) return s.empty() ? "1" : s + "1";
        for (const auto& l : letters) {
            s += "[Z";
            s += l.to_string();
            s += "]";
        }
        return s;
    }

    json to_json() const {
        json j;
        j["q_exponent"] = q_exponent;
        json ls = json::array();
        for (const auto& l : letters) ls.push_back(l.indices());
        j["letters"] = ls;
        return j;
    }
};

namespace detail {

inline void zeta_swap_adjacent(ZetaWord& w, size_t i) {
    w.q_exponent -= static_cast<long>(w.letters[i].weight()) *
                    static_cast<long>(w.letters[i + 1].weight());
    std::swap(w.letters[i], w.letters[i + 1]);
}

// Two deliberately different reduction strategies over the same local
// exchange rule. Both must land on the same normal form; the test suite
// uses their agreement as a confluence check.
inline ZetaWord bubble_left_to_right(ZetaWord w) {
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = 0; i + 1 < w.letters.size(); ++i) {
            if (zeta_letter_less(w.letters[i + 1], w.letters[i])) {
                zeta_swap_adjacent(w, i);
                moved = true;
            }
        }
    }
    return w;
}

inline ZetaWord bubble_right_to_left(ZetaWord w) {
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = w.letters.size(); i >= 2; --i) {
            if (zeta_letter_less(w.letters[i - 1], w.letters[i - 2])) {
                zeta_swap_adjacent(w, i - 2);
                moved = true;
            }
        }
    }
    return w;
}

} // namespace detail

// Insertion sort into canonical ascending order, applying the exchange
// factor once per strict inversion.
inline ZetaWord zeta_word_normal_form(ZetaWord w) {
    for (size_t i = 1; i < w.letters.size(); ++i) {
        for (size_t j = i; j >= 1 && zeta_letter_less(w.letters[j], w.letters[j - 1]); --j)
            detail::zeta_swap_adjacent(w, j - 1);
    }
    return w;
}

inline ZetaWord zeta_word_product(const ZetaWord& a, const ZetaWord& b) {
    ZetaWord cat;
    cat.q_exponent = a.q_exponent + b.q_exponent;
    cat.letters = a.letters;
    cat.letters.insert(cat.letters.end(), b.letters.begin(), b.letters.end());
    return zeta_word_normal_form(std::move(cat));
}

// Exchange consistency as a reportable relation: the two bubble
// strategies and the insertion sort must agree on a given word.
inline VerificationReport verify_exchange_confluence(const ZetaWord& w) {
    ZetaWord nf = zeta_word_normal_form(w);
    ZetaWord lr = detail::bubble_left_to_right(w);
    ZetaWord rl = detail::bubble_right_to_left(w);

    VerificationReport rep;
    rep.relation_id = "exchange_confluence";
    rep.parameters["word"] = w.to_json();
    rep.lhs = lr.to_string();
    rep.rhs = rl.to_string();
    bool ok = (nf == lr) && (nf == rl);
    rep.deviation.exact_zero = ok;
    rep.deviation.value = ok ? 0.0 : 1.0;
    rep.verdict = ok ? Verdict::exact_pass : Verdict::fail;
    rep.details["normal_form"] = nf.to_json();
    return rep;
}

} // namespace qmpl
