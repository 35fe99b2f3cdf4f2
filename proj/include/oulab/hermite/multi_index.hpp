#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "oulab/core/types.hpp"

namespace oulab {

/// Exponent vector of a tensor Hermite polynomial.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int e : entries_)
            if (e < 0) throw DomainError("MultiIndex: negative entry");
        degree_ = std::accumulate(entries_.begin(), entries_.end(), 0);
    }

    int dimension() const { return static_cast<int>(entries_.size()); }
    int degree() const { return degree_; }
    int operator[](int axis) const { return entries_[static_cast<std::size_t>(axis)]; }
    const std::vector<int>& entries() const { return entries_; }

    /// Index shifted by `delta` along `axis`; the caller checks non-negativity.
    MultiIndex shifted(int axis, int delta) const {
        auto e = entries_;
        e[static_cast<std::size_t>(axis)] += delta;
        return MultiIndex(std::move(e));
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.entries_ < b.entries_; }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> entries_;
    int degree_ = 0;
};

/// Graded lexicographic order: total degree first, then larger leading entries first.
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.entries() > b.entries();
}

/// All multi-indices of total degree at most N in d variables.
class BasisTruncation {
public:
    BasisTruncation(int dimension, int max_degree) : d_(dimension), N_(max_degree) {
        if (d_ < 1 || d_ > 3) throw DomainError("BasisTruncation: dimension must be 1, 2 or 3");
        if (N_ < 1) throw DomainError("BasisTruncation: max degree must be positive");
        std::vector<int> cur(static_cast<std::size_t>(d_), 0);
        enumerate(0, N_, cur);
        std::sort(list_.begin(), list_.end(), graded_lex_less);
        for (std::size_t i = 0; i < list_.size(); ++i) lookup_.emplace(list_[i].entries(), i);
    }

    int dimension() const { return d_; }
    int max_degree() const { return N_; }
    std::size_t size() const { return list_.size(); }
    const std::vector<MultiIndex>& indices() const { return list_; }
    const MultiIndex& operator[](std::size_t i) const { return list_[i]; }

    /// Position of `alpha` in the ordered list, or npos when outside the truncation.
    std::size_t position(const std::vector<int>& entries) const {
        auto it = lookup_.find(entries);
        return it == lookup_.end() ? npos : it->second;
    }
    std::size_t position(const MultiIndex& alpha) const { return position(alpha.entries()); }

    /// Coefficient-space mask of indices with degree at most `k`.
    std::vector<std::size_t> positions_up_to_degree(int k) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < list_.size(); ++i)
            if (list_[i].degree() <= k) out.push_back(i);
        return out;
    }

    friend bool operator==(const BasisTruncation& a, const BasisTruncation& b) {
        return a.d_ == b.d_ && a.N_ == b.N_;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    void enumerate(int axis, int budget, std::vector<int>& cur) {
        if (axis == d_) {
            list_.emplace_back(cur);
            return;
        }
        for (int k = 0; k <= budget; ++k) {
            cur[static_cast<std::size_t>(axis)] = k;
            enumerate(axis + 1, budget - k, cur);
        }
        cur[static_cast<std::size_t>(axis)] = 0;
    }

    int d_;
    int N_;
    std::vector<MultiIndex> list_;
    std::map<std::vector<int>, std::size_t> lookup_;
};

using BasisPtr = std::shared_ptr<const BasisTruncation>;

inline BasisPtr make_basis(int dimension, int max_degree) {
    return std::make_shared<const BasisTruncation>(dimension, max_degree);
}

/// binomial(n, k) as an exact integer for the small sizes used here.
inline std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

}  // namespace oulab
