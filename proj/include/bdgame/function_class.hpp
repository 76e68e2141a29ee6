#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/decision_tree.hpp"

namespace bdgame {

// An indexed, enumerable family of functions {0,1}^n -> {0,1}. Enumeration
// is duplicate-free at the representation level; distinct representations
// may still compute equal functions. Instances are immutable after
// construction and safe to share across workers.
class FunctionClass {
public:
    virtual ~FunctionClass() = default;

    virtual std::string kind() const = 0;
    virtual int dimension() const = 0;
    virtual std::uint64_t size() const = 0;
    virtual bool evaluate(std::uint64_t index, const InputPoint& x) const = 0;

    virtual std::string member_name(std::uint64_t index) const {
        return "#" + std::to_string(index);
    }

    // Materialized table; derived classes may expose a cached copy.
    virtual const TruthTable* cached_table(std::uint64_t) const { return nullptr; }

    TruthTable table_of(std::uint64_t index) const {
        if (const TruthTable* t = cached_table(index)) return *t;
        TruthTable t(dimension());
        for (std::uint32_t i = 0; i < (1u << dimension()); ++i)
            t.set(i, evaluate(index, InputPoint(i, dimension())));
        return t;
    }

    virtual const DecisionTree* tree_of(std::uint64_t) const { return nullptr; }

    virtual double member_distance(std::uint64_t i, std::uint64_t j,
                                   const InputDistribution& D) const {
        require(D.dimension() == dimension(), "member_distance: dimension mismatch");
        const TruthTable* a = cached_table(i);
        const TruthTable* b = cached_table(j);
        if (a && b) return distance(*a, *b, D);
        double d = 0.0;
        for (std::uint32_t x : D.support()) {
            InputPoint p(x, dimension());
            if (evaluate(i, p) != evaluate(j, p)) d += D.mass(x);
        }
        return d;
    }

    // Bitmask of the member's labels over an ordered point list.
    std::uint32_t labeling_over(std::uint64_t index, const std::vector<InputPoint>& points) const {
        require(points.size() <= 32, "labeling_over: too many points");
        std::uint32_t mask = 0;
        for (size_t k = 0; k < points.size(); ++k)
            if (evaluate(index, points[k])) mask |= 1u << k;
        return mask;
    }
};

// Explicit list of truth tables.
class ExplicitClass : public FunctionClass {
public:
    ExplicitClass(std::string kind, std::vector<TruthTable> tables)
        : kind_(std::move(kind)), tables_(std::move(tables)) {
        require(!tables_.empty(), "ExplicitClass: empty class");
        require_budget(tables_.size() <= kMaxClassSize, "ExplicitClass: class too large");
        n_ = tables_[0].dimension();
        for (const TruthTable& t : tables_)
            require(t.dimension() == n_, "ExplicitClass: mixed dimensions");
    }

    std::string kind() const override { return kind_; }
    int dimension() const override { return n_; }
    std::uint64_t size() const override { return tables_.size(); }
    bool evaluate(std::uint64_t index, const InputPoint& x) const override {
        return tables_[index].evaluate(x);
    }
    const TruthTable* cached_table(std::uint64_t index) const override { return &tables_[index]; }

private:
    std::string kind_;
    std::vector<TruthTable> tables_;
    int n_ = 0;
};

// All 2^k labelings of a fixed k-point set, zero elsewhere. Its VC dimension
// is exactly k.
inline std::shared_ptr<ExplicitClass> all_functions_on(int n, const std::vector<InputPoint>& pts) {
    require(!pts.empty() && pts.size() <= 16, "all_functions_on: need 1..16 points");
    std::vector<TruthTable> tables;
    tables.reserve(size_t(1) << pts.size());
    for (std::uint32_t labeling = 0; labeling < (1u << pts.size()); ++labeling) {
        TruthTable t(n);
        for (size_t k = 0; k < pts.size(); ++k) {
            require(pts[k].n == n, "all_functions_on: dimension mismatch");
            if ((labeling >> k) & 1u) t.set(pts[k].bits, true);
        }
        tables.push_back(std::move(t));
    }
    return std::make_shared<ExplicitClass>("all-functions-on-" + std::to_string(pts.size()) + "pts",
                                           std::move(tables));
}

inline std::vector<InputPoint> first_points(int n, int count) {
    require(count >= 0 && std::uint64_t(count) <= (std::uint64_t(1) << n), "first_points: too many");
    std::vector<InputPoint> pts;
    for (int i = 0; i < count; ++i) pts.emplace_back(static_cast<std::uint32_t>(i), n);
    return pts;
}

// The point-indicator family {1_x | x in {0,1}^n}; member i is 1 exactly at
// input index i.
class IndicatorClass : public FunctionClass {
public:
    explicit IndicatorClass(int n) : n_(n) {
        require(n >= 1 && n <= kMaxDimension, "IndicatorClass: dimension out of range");
    }

    std::string kind() const override { return "indicator"; }
    int dimension() const override { return n_; }
    std::uint64_t size() const override { return std::uint64_t(1) << n_; }
    bool evaluate(std::uint64_t index, const InputPoint& x) const override {
        require(x.n == n_, "IndicatorClass::evaluate: dimension mismatch");
        return x.bits == index;
    }
    std::string member_name(std::uint64_t index) const override {
        return "1_" + InputPoint(static_cast<std::uint32_t>(index), n_).to_string();
    }

    double member_distance(std::uint64_t i, std::uint64_t j,
                           const InputDistribution& D) const override {
        if (i == j) return 0.0;
        return D.mass(static_cast<std::uint32_t>(i)) + D.mass(static_cast<std::uint32_t>(j));
    }

private:
    int n_;
};

// All decision trees over {0,1}^n with at most `size_bound` leaves, in a
// canonical order (by size, then variable, then subtree order). Tables are
// materialized once so distance queries are cheap.
class TreeSizeClass : public FunctionClass {
public:
    TreeSizeClass(int n, int size_bound) : n_(n), size_bound_(size_bound) {
        require(n >= 1 && n <= 16, "TreeSizeClass: dimension out of range");
        require(size_bound >= 1, "TreeSizeClass: bad size bound");

        std::vector<std::uint64_t> count(static_cast<size_t>(size_bound) + 1, 0);
        count[1] = 2;
        std::uint64_t total = 2;
        for (int k = 2; k <= size_bound; ++k) {
            std::uint64_t c = 0;
            for (int i = 1; i < k; ++i) {
                std::uint64_t prod = count[static_cast<size_t>(i)] * count[static_cast<size_t>(k - i)];
                require_budget(prod / count[static_cast<size_t>(i)] == count[static_cast<size_t>(k - i)],
                               "TreeSizeClass: enumeration overflow");
                c += prod;
            }
            c *= static_cast<std::uint64_t>(n);
            count[static_cast<size_t>(k)] = c;
            total += c;
            require_budget(total <= kMaxClassSize, "TreeSizeClass: enumeration budget exceeded");
        }

        std::vector<std::vector<DecisionTree>> by_size(static_cast<size_t>(size_bound) + 1);
        by_size[1] = {DecisionTree::leaf(n, false), DecisionTree::leaf(n, true)};
        for (int k = 2; k <= size_bound; ++k)
            for (int var = 0; var < n; ++var)
                for (int i = 1; i < k; ++i)
                    for (const DecisionTree& l : by_size[static_cast<size_t>(i)])
                        for (const DecisionTree& r : by_size[static_cast<size_t>(k - i)])
                            by_size[static_cast<size_t>(k)].push_back(
                                DecisionTree::node(n, var, l, r));

        for (int k = 1; k <= size_bound; ++k)
            for (DecisionTree& t : by_size[static_cast<size_t>(k)]) {
                tables_.push_back(t.to_table());
                trees_.push_back(std::move(t));
            }
    }

    std::string kind() const override { return "trees<=" + std::to_string(size_bound_); }
    int dimension() const override { return n_; }
    std::uint64_t size() const override { return trees_.size(); }
    bool evaluate(std::uint64_t index, const InputPoint& x) const override {
        return tables_[index].evaluate(x);
    }
    const TruthTable* cached_table(std::uint64_t index) const override { return &tables_[index]; }
    const DecisionTree* tree_of(std::uint64_t index) const override { return &trees_[index]; }
    std::string member_name(std::uint64_t index) const override {
        return trees_[index].to_string();
    }
    int size_bound() const { return size_bound_; }

private:
    int n_;
    int size_bound_;
    std::vector<DecisionTree> trees_;
    std::vector<TruthTable> tables_;
};

// Wraps a base family with a one-point override: each member is a triple
// (base member, special point, special value). Index layout is
// ((base_index << n) | point) << 1 | value.
class SpecialCasedClass : public FunctionClass {
public:
    explicit SpecialCasedClass(std::shared_ptr<const FunctionClass> base)
        : base_(std::move(base)), n_(base_->dimension()) {
        require_budget(base_->size() <= (kMaxClassSize >> (n_ + 1)),
                       "SpecialCasedClass: class too large");
    }

    struct Triple {
        std::uint64_t base_index;
        InputPoint point;
        bool value;
    };

    std::uint64_t encode(std::uint64_t base_index, InputPoint point, bool value) const {
        require(point.n == n_, "SpecialCasedClass::encode: dimension mismatch");
        return ((base_index << n_) | point.bits) << 1 | (value ? 1 : 0);
    }

    Triple decode(std::uint64_t index) const {
        Triple t;
        t.value = index & 1;
        index >>= 1;
        t.point = InputPoint(static_cast<std::uint32_t>(index & ((std::uint64_t(1) << n_) - 1)), n_);
        t.base_index = index >> n_;
        return t;
    }

    std::string kind() const override { return "special-cased(" + base_->kind() + ")"; }
    int dimension() const override { return n_; }
    std::uint64_t size() const override { return base_->size() << (n_ + 1); }
    bool evaluate(std::uint64_t index, const InputPoint& x) const override {
        Triple t = decode(index);
        if (x == t.point) return t.value;
        return base_->evaluate(t.base_index, x);
    }
    std::string member_name(std::uint64_t index) const override {
        Triple t = decode(index);
        return "(" + base_->member_name(t.base_index) + "," + t.point.to_string() + "," +
               (t.value ? "1" : "0") + ")";
    }

    const FunctionClass& base() const { return *base_; }

private:
    std::shared_ptr<const FunctionClass> base_;
    int n_;
};

}  // namespace bdgame
