#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/decision_tree.hpp"
#include "bdgame/function_class.hpp"

namespace bdgame {

// The white-box object a player hands over: a member of an enumerable class
// (class + index), a standalone decision tree, or both. Defenders see this
// plus the function's class description.
struct Representation {
    std::shared_ptr<const FunctionClass> cls;
    std::uint64_t index = 0;
    std::shared_ptr<const DecisionTree> tree;

    static Representation of_member(std::shared_ptr<const FunctionClass> c, std::uint64_t i) {
        Representation r;
        r.cls = std::move(c);
        r.index = i;
        return r;
    }

    static Representation of_tree(DecisionTree t) {
        Representation r;
        r.tree = std::make_shared<DecisionTree>(std::move(t));
        return r;
    }

    int dimension() const {
        if (tree) return tree->dimension();
        require(cls != nullptr, "Representation: empty");
        return cls->dimension();
    }

    bool evaluate(const InputPoint& x, std::uint64_t* tree_visits = nullptr) const {
        if (tree) return tree->evaluate(x, tree_visits);
        require(cls != nullptr, "Representation: empty");
        return cls->evaluate(index, x);
    }

    const DecisionTree* decision_tree() const {
        if (tree) return tree.get();
        if (cls) return cls->tree_of(index);
        return nullptr;
    }

    TruthTable table() const {
        if (tree) return tree->to_table();
        require(cls != nullptr, "Representation: empty");
        return cls->table_of(index);
    }

    std::string describe() const {
        if (tree) return tree->to_string();
        require(cls != nullptr, "Representation: empty");
        return cls->member_name(index);
    }
};

// Exact disagreement mass between two representations under D, choosing the
// cheapest exact route available.
inline double representation_distance(const Representation& a, const Representation& b,
                                      const InputDistribution& D) {
    const DecisionTree* ta = a.decision_tree();
    const DecisionTree* tb = b.decision_tree();
    if (ta && tb && D.is_uniform()) return tree_disagreement_uniform(*ta, *tb);
    if (a.cls && b.cls && a.cls.get() == b.cls.get())
        return a.cls->member_distance(a.index, b.index, D);
    double d = 0.0;
    for (std::uint32_t x : D.support()) {
        InputPoint p(x, D.dimension());
        if (a.evaluate(p) != b.evaluate(p)) d += D.mass(x);
    }
    return d;
}

inline bool representation_valid_backdoor(const Representation& f, const Representation& fstar,
                                          const InputDistribution& D, double eps,
                                          const InputPoint& xstar) {
    require(eps > 0.0, "representation_valid_backdoor: eps must be positive");
    if (f.evaluate(xstar) == fstar.evaluate(xstar)) return false;
    return representation_distance(f, fstar, D) <= eps;
}

}  // namespace bdgame
