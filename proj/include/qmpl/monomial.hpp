#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmpl/errors.hpp"

namespace qmpl {

// Exponent list of a normal-ordered monomial: (variable id, exponent)
// pairs in strictly increasing id order, exponents positive. The empty
// key is the unit monomial.
using MonomialKey = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline long key_degree(const MonomialKey& k) {
    long d = 0;
    for (const auto& [v, e] : k) d += e;
    return d;
}

inline std::string key_to_string(const MonomialKey& k) {
    if (k.empty()) return "1";
    std::string s;
    for (const auto& [v, e] : k) {
        if (!s.empty()) s += " ";
        s += "z" + std::to_string(v);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

// A word of generators reduced to normal order. The generators satisfy
// z_i z_j = q z_j z_i for i < j, so moving a higher id left past a lower
// one costs q^(-1); the accumulated power is -(inversion count).
struct NormalMonomial {
    long q_exponent = 0;
    MonomialKey exps;

    long total_degree() const { return key_degree(exps); }
};

inline NormalMonomial normalize_monomial(std::span<const std::uint32_t> word) {
    // insertion sort, counting every adjacent swap that moves a higher
    // id leftward past a strictly lower one
    std::vector<std::uint32_t> v(word.begin(), word.end());
    long swaps = 0;
    for (size_t i = 1; i < v.size(); ++i) {
        std::uint32_t x = v[i];
        size_t j = i;
        while (j > 0 && v[j - 1] > x) {
            v[j] = v[j - 1];
            --j;
            ++swaps;
        }
        v[j] = x;
    }
    NormalMonomial m;
    m.q_exponent = -swaps;
    for (std::uint32_t id : v) {
        if (!m.exps.empty() && m.exps.back().first == id)
            ++m.exps.back().second;
        else
            m.exps.push_back({id, 1});
    }
    return m;
}

// Inversions created by concatenating two normal-ordered keys: pairs
// (i in a, j in b) with i > j, counted with exponent multiplicity.
inline long cross_inversions(const MonomialKey& a, const MonomialKey& b) {
    long inv = 0;
    for (const auto& [va, ea] : a)
        for (const auto& [vb, eb] : b)
            if (va > vb) inv += static_cast<long>(ea) * static_cast<long>(eb);
    return inv;
}

inline MonomialKey merge_keys(const MonomialKey& a, const MonomialKey& b) {
    MonomialKey out;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.push_back({a[i].first, a[i].second + b[j].second});
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace qmpl
