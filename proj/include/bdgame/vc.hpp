#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/function_class.hpp"

namespace bdgame {

// A shattered point set together with, for each of the 2^k labelings, a
// class member realizing it (lowest representation index).
struct ShatterWitness {
    std::vector<InputPoint> points;
    std::vector<std::uint64_t> assignments;  // indexed by labeling bitmask

    std::uint64_t member_for(std::uint32_t labeling) const { return assignments[labeling]; }
};

struct ShatterResult {
    bool shattered = false;
    std::optional<ShatterWitness> witness;
};

inline void check_enumeration_budget(const FunctionClass& cls, size_t num_points) {
    require_budget(cls.size() <= kMaxClassSize, "enumeration budget exceeded: class too large");
    require_budget(num_points <= kMaxShatterPoints,
                   "enumeration budget exceeded: too many points");
}

inline ShatterResult is_shattered(const FunctionClass& cls, const std::vector<InputPoint>& points) {
    check_enumeration_budget(cls, points.size());
    size_t k = points.size();
    if (k == 0) {
        ShatterResult r;
        r.shattered = true;
        r.witness = ShatterWitness{points, {0}};
        return r;
    }
    // More labelings than members can realize: cannot be shattered.
    if (k >= 64 || (std::uint64_t(1) << k) > cls.size()) return {};

    std::vector<std::int64_t> assign(size_t(1) << k, -1);
    std::uint64_t found = 0;
    for (std::uint64_t i = 0; i < cls.size(); ++i) {
        std::uint32_t mask = cls.labeling_over(i, points);
        if (assign[mask] < 0) {
            assign[mask] = static_cast<std::int64_t>(i);
            if (++found == (std::uint64_t(1) << k)) break;
        }
    }
    if (found != (std::uint64_t(1) << k)) return {};
    ShatterResult r;
    r.shattered = true;
    ShatterWitness w;
    w.points = points;
    w.assignments.assign(assign.begin(), assign.end());
    r.witness = std::move(w);
    return r;
}

// Number of distinct labelings of `points` realized by the class.
inline std::uint64_t growth_count(const FunctionClass& cls, const std::vector<InputPoint>& points) {
    check_enumeration_budget(cls, points.size());
    if (points.empty()) return 1;
    std::vector<std::uint32_t> masks;
    masks.reserve(cls.size());
    for (std::uint64_t i = 0; i < cls.size(); ++i) masks.push_back(cls.labeling_over(i, points));
    std::sort(masks.begin(), masks.end());
    return static_cast<std::uint64_t>(std::unique(masks.begin(), masks.end()) - masks.begin());
}

namespace detail {

// One representative input per distinct evaluation column; a set containing
// two identical columns can never be shattered.
inline std::vector<InputPoint> distinct_columns(const FunctionClass& cls) {
    int n = cls.dimension();
    std::uint64_t domain = std::uint64_t(1) << n;
    require_budget(cls.size() * domain <= (std::uint64_t(1) << 26),
                   "enumeration budget exceeded: domain x class too large");
    std::vector<std::vector<std::uint64_t>> columns;
    std::vector<InputPoint> reps;
    for (std::uint32_t x = 0; x < domain; ++x) {
        InputPoint p(x, n);
        std::vector<std::uint64_t> col((cls.size() + 63) / 64, 0);
        for (std::uint64_t i = 0; i < cls.size(); ++i)
            if (cls.evaluate(i, p)) col[i >> 6] |= 1ull << (i & 63);
        bool fresh = true;
        for (const auto& c : columns)
            if (c == col) {
                fresh = false;
                break;
            }
        if (fresh) {
            columns.push_back(std::move(col));
            reps.push_back(p);
        }
    }
    return reps;
}

// Visits every k-subset of {0..count-1} until `visit` returns true.
template <typename Visit>
inline bool for_each_subset(size_t count, size_t k, Visit&& visit) {
    if (k > count) return false;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (visit(idx)) return true;
        if (k == 0) return false;
        size_t i = k;
        while (i > 0 && idx[i - 1] == count - k + (i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Largest d such that some d-subset of the domain is shattered. Searches
// sizes in increasing order; shattering is downward closed, so the first
// size with no shattered subset ends the search.
inline int vc_dimension(const FunctionClass& cls) {
    check_enumeration_budget(cls, 0);
    std::vector<InputPoint> candidates = detail::distinct_columns(cls);
    int best = 0;
    for (size_t k = 1; k <= candidates.size(); ++k) {
        if ((std::uint64_t(1) << std::min<size_t>(k, 63)) > cls.size()) break;
        bool any = detail::for_each_subset(candidates.size(), k, [&](const std::vector<size_t>& idx) {
            std::vector<InputPoint> pts;
            pts.reserve(k);
            for (size_t i : idx) pts.push_back(candidates[i]);
            return is_shattered(cls, pts).shattered;
        });
        if (!any) break;
        best = static_cast<int>(k);
    }
    return best;
}

}  // namespace bdgame
