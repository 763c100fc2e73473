#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmpl/rational.hpp"

namespace qmpl {

// Dense Laurent polynomial in q over the rationals. Kept trimmed: the
// first and last stored coefficients are nonzero, and the zero
// polynomial stores nothing.
class LaurentPoly {
  public:
    LaurentPoly() = default;

    static LaurentPoly constant(const Rational& c) {
        LaurentPoly p;
        if (c != 0) {
            p.min_exp_ = 0;
            p.c_ = {c};
        }
        return p;
    }

    static LaurentPoly q_power(int e, const Rational& c = Rational(1)) {
        LaurentPoly p;
        if (c != 0) {
            p.min_exp_ = e;
            p.c_ = {c};
        }
        return p;
    }

    // 1 - q^k
    static LaurentPoly one_minus_qk(int k) {
        LaurentPoly p;
        p.min_exp_ = 0;
        p.c_.assign(static_cast<size_t>(k) + 1, Rational(0));
        p.c_.front() = 1;
        p.c_.back() = -1;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int min_exp() const { return min_exp_; }
    int max_exp() const { return min_exp_ + static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational coeff(int e) const {
        if (is_zero() || e < min_exp() || e > max_exp()) return Rational(0);
        return c_[static_cast<size_t>(e - min_exp_)];
    }

    // True when the polynomial is a plain rational number.
    bool is_constant() const { return c_.empty() || (c_.size() == 1 && min_exp_ == 0); }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        int lo = std::min(a.min_exp(), b.min_exp());
        int hi = std::max(a.max_exp(), b.max_exp());
        LaurentPoly out;
        out.min_exp_ = lo;
        out.c_.assign(static_cast<size_t>(hi - lo) + 1, Rational(0));
        for (int e = lo; e <= hi; ++e)
            out.c_[static_cast<size_t>(e - lo)] = a.coeff(e) + b.coeff(e);
        out.trim();
        return out;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        return a + (-b);
    }

    LaurentPoly operator-() const {
        LaurentPoly out = *this;
        for (auto& c : out.c_) c = -c;
        return out;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        LaurentPoly out;
        out.min_exp_ = a.min_exp_ + b.min_exp_;
        out.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        out.trim();
        return out;
    }

    LaurentPoly scaled(const Rational& s) const {
        if (s == 0) return {};
        LaurentPoly out = *this;
        for (auto& c : out.c_) c *= s;
        return out;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.min_exp_ == b.min_exp_ && a.c_ == b.c_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) {
        return !(a == b);
    }

    // Exact division by (1 - q^k); nullopt when not divisible. Uses the
    // ascending recurrence u_i = p_i + u_{i-k} and demands the trailing
    // window vanish.
    std::optional<LaurentPoly> divide_one_minus_qk(int k) const {
        if (is_zero()) return LaurentPoly{};
        size_t P = c_.size();
        if (P <= static_cast<size_t>(k)) {
            return std::nullopt;
        }
        std::vector<Rational> u(P, Rational(0));
        for (size_t i = 0; i < P; ++i) {
            u[i] = c_[i];
            if (i >= static_cast<size_t>(k)) u[i] += u[i - static_cast<size_t>(k)];
        }
        for (size_t i = P - static_cast<size_t>(k); i < P; ++i)
            if (u[i] != 0) return std::nullopt;
        LaurentPoly out;
        out.min_exp_ = min_exp_;
        out.c_.assign(u.begin(), u.end() - k);
        out.trim();
        return out;
    }

    Rational eval(const Rational& t) const {
        if (is_zero()) return Rational(0);
        require(t != 0 || min_exp_ >= 0, errc::division_by_zero,
                "Laurent polynomial with poles at 0");
        Rational acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
        return acc * pow_int(t, min_exp_);
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            int e = min_exp_ + static_cast<int>(i);
            std::string term = qmpl::to_string(c_[i]);
            if (e != 0) term += "*q^" + std::to_string(e);
            if (!s.empty()) s += " + ";
            s += term;
        }
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["min_exp"] = is_zero() ? 0 : min_exp_;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : c_) arr.push_back(qmpl::to_string(c));
        j["coeffs"] = arr;
        return j;
    }

  private:
    void trim() {
        size_t lead = 0;
        while (lead < c_.size() && c_[lead] == 0) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            min_exp_ = 0;
            return;
        }
        size_t tail = c_.size();
        while (tail > lead && c_[tail - 1] == 0) --tail;
        c_ = std::vector<Rational>(c_.begin() + static_cast<long>(lead),
                                   c_.begin() + static_cast<long>(tail));
        min_exp_ += static_cast<int>(lead);
    }

    int min_exp_ = 0;
    std::vector<Rational> c_;
};

// Rational function of q of the restricted shape the ordered series
// produce: a Laurent polynomial over a product of (1 - q^k) factors.
// Normalization cancels denominator factors that divide the numerator,
// which keeps equality testing and linear algebra exact.
class QRatio {
  public:
    QRatio() = default;

    static QRatio from_poly(LaurentPoly num) {
        QRatio r;
        r.num_ = std::move(num);
        return r;
    }

    static QRatio from_rational(const Rational& c) {
        return from_poly(LaurentPoly::constant(c));
    }

    // num / prod (1 - q^k)^mult
    static QRatio with_denominator(LaurentPoly num, std::map<int, int> den) {
        QRatio r;
        r.num_ = std::move(num);
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    bool is_zero() const { return num_.is_zero(); }
    const LaurentPoly& num() const { return num_; }
    const std::map<int, int>& den() const { return den_; }

    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    bool is_polynomial() const { return den_.empty(); }

    friend QRatio operator+(const QRatio& a, const QRatio& b) {
        QRatio out;
        LaurentPoly na = a.num_, nb = b.num_;
        std::map<int, int> den;
        for (const auto& [k, m] : a.den_) den[k] = m;
        for (const auto& [k, m] : b.den_) den[k] = std::max(den[k], m);
        for (const auto& [k, m] : den) {
            int ma = a.mult(k), mb = b.mult(k);
            for (int i = ma; i < m; ++i) na = na * LaurentPoly::one_minus_qk(k);
            for (int i = mb; i < m; ++i) nb = nb * LaurentPoly::one_minus_qk(k);
        }
        out.num_ = na + nb;
        out.den_ = std::move(den);
        out.normalize();
        return out;
    }

    friend QRatio operator-(const QRatio& a, const QRatio& b) { return a + (-b); }

    QRatio operator-() const {
        QRatio out = *this;
        out.num_ = -out.num_;
        return out;
    }

    friend QRatio operator*(const QRatio& a, const QRatio& b) {
        QRatio out;
        out.num_ = a.num_ * b.num_;
        out.den_ = a.den_;
        for (const auto& [k, m] : b.den_) out.den_[k] += m;
        out.normalize();
        return out;
    }

    QRatio scaled_by_poly(const LaurentPoly& p) const {
        QRatio out = *this;
        out.num_ = out.num_ * p;
        out.normalize();
        return out;
    }

    friend bool operator==(const QRatio& a, const QRatio& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const QRatio& a, const QRatio& b) { return !(a == b); }

    // Value at a rational point; the point must avoid every denominator
    // zero (t^k = 1) and, for negative Laurent exponents, t = 0.
    Rational specialize(const Rational& t) const {
        Rational den(1);
        for (const auto& [k, m] : den_) {
            Rational f = Rational(1) - pow_int(t, k);
            require(f != 0, errc::division_by_zero,
                    "specialization point is a root of the denominator");
            den *= pow_int(f, m);
        }
        return num_.eval(t) / den;
    }

    std::string to_string() const {
        std::string s = num_.to_string();
        if (!den_.empty()) {
            s = "(" + s + ") / (";
            bool first = true;
            for (const auto& [k, m] : den_) {
                if (!first) s += " * ";
                first = false;
                s += "(1-q^" + std::to_string(k) + ")";
                if (m > 1) s += "^" + std::to_string(m);
            }
            s += ")";
        }
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["num"] = num_.to_json();
        nlohmann::json den = nlohmann::json::array();
        for (const auto& [k, m] : den_) den.push_back({k, m});
        j["den"] = den;
        return j;
    }

  private:
    int mult(int k) const {
        auto it = den_.find(k);
        return it == den_.end() ? 0 : it->second;
    }

    void normalize() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto it = den_.begin(); it != den_.end();) {
            while (it->second > 0) {
                auto q = num_.divide_one_minus_qk(it->first);
                if (!q) break;
                num_ = std::move(*q);
                --it->second;
            }
            it = (it->second == 0) ? den_.erase(it) : std::next(it);
        }
    }

    LaurentPoly num_;
    std::map<int, int> den_; // factor (1 - q^k) -> multiplicity, k >= 1
};

} // namespace qmpl
