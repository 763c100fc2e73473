#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmpl/composition.hpp"
#include "qmpl/laurent.hpp"
#include "qmpl/monomial.hpp"

namespace qmpl {

// Truncated formal series over normal-ordered monomials in q-commuting
// variables, with exact rational-function-of-q coefficients. Monomials
// above the degree cap are dropped at every operation, so two series are
// only comparable (or multipliable) at equal caps.
class FormalSeries {
  public:
    explicit FormalSeries(long degree_cap) : cap_(degree_cap) {
        require(degree_cap >= 1, errc::invalid_parameter, "degree cap must be >= 1");
    }

    static FormalSeries unit(long degree_cap) {
        FormalSeries s(degree_cap);
        s.c_.emplace(MonomialKey{}, QRatio::from_rational(Rational(1)));
        return s;
    }

    long degree_cap() const { return cap_; }
    bool is_zero() const { return c_.empty(); }
    const std::map<MonomialKey, QRatio>& terms() const { return c_; }

    // The monomial's q-power folds into the coefficient here, so stored
    // keys are pure variable exponents.
    void add_term(const NormalMonomial& m, const QRatio& coeff) {
        if (m.total_degree() > cap_) return;
        QRatio c = coeff;
        if (m.q_exponent != 0)
            c = c.scaled_by_poly(LaurentPoly::q_power(static_cast<int>(m.q_exponent)));
        add_key(m.exps, c);
    }

    void add_key(const MonomialKey& key, const QRatio& coeff) {
        if (coeff.is_zero() || key_degree(key) > cap_) return;
        auto [it, fresh] = c_.try_emplace(key, coeff);
        if (!fresh) {
            it->second = it->second + coeff;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    QRatio coefficient(const MonomialKey& key) const {
        auto it = c_.find(key);
        return it == c_.end() ? QRatio{} : it->second;
    }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
        if (a.cap_ != b.cap_ || a.c_.size() != b.c_.size()) return false;
        auto ia = a.c_.begin();
        for (auto ib = b.c_.begin(); ib != b.c_.end(); ++ia, ++ib)
            if (ia->first != ib->first || ia->second != ib->second) return false;
        return true;
    }
    friend bool operator!=(const FormalSeries& a, const FormalSeries& b) {
        return !(a == b);
    }

    // Commutative specialization: q and every variable go to rational
    // values. The normal-ordering q-powers are already folded into the
    // coefficients, so this is a plain evaluation.
    Rational specialize(const Rational& q0,
                        const std::map<std::uint32_t, Rational>& values) const {
        Rational total(0);
        for (const auto& [key, coeff] : c_) {
            Rational term = coeff.specialize(q0);
            for (const auto& [v, e] : key) {
                auto it = values.find(v);
                require(it != values.end(), errc::invalid_parameter,
                        "no value for variable z" + std::to_string(v));
                term *= pow_int(it->second, e);
            }
            total += term;
        }
        return total;
    }

    std::string to_string() const {
        std::string s;
        for (const auto& [key, coeff] : c_) {
            if (!s.empty()) s += " + ";
            s += "[" + coeff.to_string() + "] " + key_to_string(key);
        }
        return s.empty() ? "0" : s;
    }

  private:
    long cap_;
    std::map<MonomialKey, QRatio> c_;
};

// Product in the q-commuting algebra: concatenation picks up q^(-inv)
// where inv counts the crossings needed to re-sort the variables.
inline FormalSeries multiply_series(const FormalSeries& a, const FormalSeries& b) {
    require(a.degree_cap() == b.degree_cap(), errc::degree_cap_mismatch,
            "factors have different degree caps");
    FormalSeries out(a.degree_cap());
    for (const auto& [ka, ca] : a.terms()) {
        long da = key_degree(ka);
        for (const auto& [kb, cb] : b.terms()) {
            if (da + key_degree(kb) > out.degree_cap()) continue;
            long inv = cross_inversions(ka, kb);
            QRatio c = ca * cb;
            if (inv != 0)
                c = c.scaled_by_poly(LaurentPoly::q_power(static_cast<int>(-inv)));
            out.add_key(merge_keys(ka, kb), c);
        }
    }
    return out;
}

// One slot of an ordered series: the multiset of variable ids whose
// product forms the slot argument. Plain arguments are singletons;
// merged slots arise from closure candidates.
using SlotSet = std::vector<std::uint32_t>; // sorted, non-empty

// The ordered q-deformed series: sum over chains 0 < k_1 < ... < k_m of
// the already-normal-ordered monomial where each variable in slot j
// carries exponent k_j, divided by prod (1 - q^{k_j})^{n_j}. By the
// ordering convention the monomial is written directly in increasing
// variable order and no q-powers appear.
inline FormalSeries ordered_qmpl_series(const Composition& comp,
                                        const std::vector<SlotSet>& slots,
                                        long degree_cap) {
    require(comp.depth() == static_cast<int>(slots.size()), errc::invalid_parameter,
            "slot count does not match composition depth");
    for (const auto& s : slots) {
        require(!s.empty(), errc::invalid_parameter, "empty slot");
        for (size_t i = 1; i < s.size(); ++i)
            require(s[i - 1] <= s[i], errc::invalid_parameter, "slot ids must be sorted");
    }

    FormalSeries out(degree_cap);
    int m = comp.depth();
    std::vector<long> k(static_cast<size_t>(m), 0);

    auto emit = [&]() {
        MonomialKey key;
        std::map<int, int> den;
        for (int j = 0; j < m; ++j) {
            MonomialKey slot_key;
            for (std::uint32_t v : slots[static_cast<size_t>(j)]) {
                if (!slot_key.empty() && slot_key.back().first == v)
                    slot_key.back().second += static_cast<std::uint32_t>(k[static_cast<size_t>(j)]);
                else
                    slot_key.push_back({v, static_cast<std::uint32_t>(k[static_cast<size_t>(j)])});
            }
            key = merge_keys(key, slot_key);
            den[static_cast<int>(k[static_cast<size_t>(j)])] += comp[j];
        }
        out.add_key(key, QRatio::with_denominator(LaurentPoly::constant(Rational(1)),
                                                  std::move(den)));
    };

    auto rec = [&](auto&& self, int j, long lo, long used) -> void {
        if (j == m) {
            emit();
            return;
        }
        size_t sj = static_cast<size_t>(j);
        long size_j = static_cast<long>(slots[sj].size());
        for (long v = lo + 1;; ++v) {
            // smallest possible total degree if k_j = v and the rest
            // increase by one each step
            long floor_rest = 0;
            for (int l = j; l < m; ++l)
                floor_rest += (v + (l - j)) * static_cast<long>(slots[static_cast<size_t>(l)].size());
            if (used + floor_rest > degree_cap) break;
            k[sj] = v;
            self(self, j + 1, v, used + v * size_j);
        }
    };
    rec(rec, 0, 0, 0);
    return out;
}

// Convenience form: one distinct variable per slot, given as the
// permutation of ids attached to the slots left to right.
inline FormalSeries ordered_qmpl_series(const Composition& comp,
                                        const std::vector<std::uint32_t>& slot_order,
                                        long degree_cap) {
    std::vector<SlotSet> slots;
    slots.reserve(slot_order.size());
    for (std::uint32_t v : slot_order) slots.push_back({v});
    return ordered_qmpl_series(comp, slots, degree_cap);
}

} // namespace qmpl
