#pragma once

#include <compare>
#include <numeric>
#include <string>
#include <vector>

#include "qmpl/errors.hpp"

namespace qmpl {

// An exponent tuple (n_1, ..., n_m), every entry >= 1. Depth is m, weight
// is the sum of the entries.
class Composition {
  public:
    Composition() = default;

    explicit Composition(std::vector<int> indices) : n_(std::move(indices)) {
        require(!n_.empty(), errc::invalid_parameter, "empty composition");
        for (int k : n_)
            require(k >= 1, errc::invalid_parameter, "composition entries must be >= 1");
    }

    const std::vector<int>& indices() const { return n_; }
    int depth() const { return static_cast<int>(n_.size()); }
    int weight() const { return std::accumulate(n_.begin(), n_.end(), 0); }
    int operator[](int j) const { return n_[static_cast<size_t>(j)]; }

    std::string to_string() const {
        std::string s = "(";
        for (size_t i = 0; i < n_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(n_[i]);
        }
        return s + ")";
    }

    friend auto operator<=>(const Composition&, const Composition&) = default;

  private:
    std::vector<int> n_;
};

} // namespace qmpl
