#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"

namespace bdgame {

// Rooted binary decision tree over {0,1}^n: internal nodes test a variable
// (left on 0, right on 1), leaves carry the output bit. Size is the number
// of leaves. The text form is `(x3 left right)` for a node testing x3
// (1-based, matching the usual drawing) and `0`/`1` for leaves.
class DecisionTree {
public:
    struct Node {
        int var = -1;    // -1 for a leaf
        int left = -1;
        int right = -1;
        bool label = false;
    };

    static DecisionTree leaf(int n, bool label) {
        DecisionTree t;
        t.n_ = n;
        Node nd;
        nd.label = label;
        t.nodes_.push_back(nd);
        t.root_ = 0;
        return t;
    }

    static DecisionTree node(int n, int var, const DecisionTree& l, const DecisionTree& r) {
        require(var >= 0 && var < n, "DecisionTree::node: variable index out of range");
        require(l.n_ == n && r.n_ == n, "DecisionTree::node: dimension mismatch");
        DecisionTree t;
        t.n_ = n;
        int lroot = t.absorb(l, l.root_);
        int rroot = t.absorb(r, r.root_);
        Node nd;
        nd.var = var;
        nd.left = lroot;
        nd.right = rroot;
        t.nodes_.push_back(nd);
        t.root_ = static_cast<int>(t.nodes_.size()) - 1;
        return t;
    }

    int dimension() const { return n_; }

    int size() const {  // number of leaves reachable from the root
        return count_leaves(root_);
    }

    bool evaluate(const InputPoint& x, std::uint64_t* visits = nullptr) const {
        require(x.n == n_, "DecisionTree::evaluate: dimension mismatch");
        int i = root_;
        while (nodes_[static_cast<size_t>(i)].var >= 0) {
            const Node& nd = nodes_[static_cast<size_t>(i)];
            if (visits) ++*visits;
            i = x.bit(nd.var) ? nd.right : nd.left;
        }
        if (visits) ++*visits;
        return nodes_[static_cast<size_t>(i)].label;
    }

    // Bitmask of the distinct variables tested on x's root-to-leaf path.
    std::uint32_t path_var_mask(const InputPoint& x, std::uint64_t* visits = nullptr) const {
        require(x.n == n_, "DecisionTree::path_var_mask: dimension mismatch");
        std::uint32_t mask = 0;
        int i = root_;
        while (nodes_[static_cast<size_t>(i)].var >= 0) {
            const Node& nd = nodes_[static_cast<size_t>(i)];
            if (visits) ++*visits;
            mask |= 1u << nd.var;
            i = x.bit(nd.var) ? nd.right : nd.left;
        }
        if (visits) ++*visits;
        return mask;
    }

    // Number of distinct variables on the evaluation path (repeats count once).
    int depth_at(const InputPoint& x, std::uint64_t* visits = nullptr) const {
        return std::popcount(path_var_mask(x, visits));
    }

    // Under the uniform distribution, the mass of the set of inputs reaching
    // the same leaf as x is exactly 2^-depth.
    double leaf_probability(const InputPoint& x) const {
        return std::ldexp(1.0, -depth_at(x));
    }

    // Distinct-variable mask of every leaf's path, in a canonical order.
    std::vector<std::uint32_t> leaf_path_masks() const {
        std::vector<std::uint32_t> out;
        collect_masks(root_, 0, out);
        return out;
    }

    std::string to_string() const { return format(root_); }

    static DecisionTree parse(int n, const std::string& text) {
        DecisionTree t;
        t.n_ = n;
        size_t pos = 0;
        t.root_ = t.parse_node(text, pos, n);
        skip_ws(text, pos);
        require(pos == text.size(), "DecisionTree::parse: trailing input");
        return t;
    }

    TruthTable to_table() const {
        TruthTable tt(n_);
        for (std::uint32_t i = 0; i < (1u << n_); ++i)
            tt.set(i, evaluate(InputPoint(i, n_)));
        return tt;
    }

    // Galton-Watson generation with the continue probability tuned so the
    // expected leaf count is about size_bound/2; trees over the bound are
    // redrawn.
    static DecisionTree random(int n, int size_bound, RandomSource& rng) {
        require(n >= 1 && size_bound >= 1, "DecisionTree::random: bad parameters");
        if (size_bound == 1) return leaf(n, rng.next_bit());
        double target = std::max(1.5, size_bound / 2.0);
        double p_leaf = std::min(0.95, std::max(0.52, target / (2.0 * target - 1.0)));
        for (;;) {
            DecisionTree t;
            t.n_ = n;
            int leaves = 0;
            t.root_ = t.grow(n, p_leaf, size_bound, leaves, rng);
            if (t.root_ >= 0) return t;
        }
    }

    // Reroute the leaf reached by xstar through a chain of fresh variables so
    // that xstar's path tests target_depth distinct variables and ends at a
    // flipped leaf; every off-chain branch keeps the old label. Throws
    // AttackUnavailableError when fewer than target_depth variables exist.
    DecisionTree graft_deep_flip(const InputPoint& xstar, int target_depth) const {
        require(xstar.n == n_, "graft_deep_flip: dimension mismatch");
        require(target_depth >= 0, "graft_deep_flip: negative depth");
        if (target_depth > n_)
            throw AttackUnavailableError("graft_deep_flip: target depth exceeds dimension");
        std::uint32_t path = path_var_mask(xstar);
        int needed = target_depth - std::popcount(path);

        DecisionTree out = *this;
        int leaf_idx = out.root_;
        while (out.nodes_[static_cast<size_t>(leaf_idx)].var >= 0) {
            const Node& nd = out.nodes_[static_cast<size_t>(leaf_idx)];
            leaf_idx = xstar.bit(nd.var) ? nd.right : nd.left;
        }
        bool old_label = out.nodes_[static_cast<size_t>(leaf_idx)].label;

        if (needed <= 0) {
            out.nodes_[static_cast<size_t>(leaf_idx)].label = !old_label;
            return out;
        }

        std::vector<int> chain_vars;
        for (int v = 0; v < n_ && static_cast<int>(chain_vars.size()) < needed; ++v)
            if (!(path & (1u << v))) chain_vars.push_back(v);

        // Build the chain bottom-up: deepest node first.
        int below = out.add_leaf(!old_label);
        for (int k = static_cast<int>(chain_vars.size()) - 1; k >= 0; --k) {
            int v = chain_vars[static_cast<size_t>(k)];
            int keep = out.add_leaf(old_label);
            Node nd;
            nd.var = v;
            if (xstar.bit(v)) {
                nd.right = below;
                nd.left = keep;
            } else {
                nd.left = below;
                nd.right = keep;
            }
            out.nodes_.push_back(nd);
            below = static_cast<int>(out.nodes_.size()) - 1;
        }
        // Splice the chain in place of the old leaf.
        out.nodes_[static_cast<size_t>(leaf_idx)] = out.nodes_[static_cast<size_t>(below)];
        return out;
    }

private:
    int absorb(const DecisionTree& src, int idx) {
        const Node& nd = src.nodes_[static_cast<size_t>(idx)];
        if (nd.var < 0) {
            nodes_.push_back(nd);
            return static_cast<int>(nodes_.size()) - 1;
        }
        int l = absorb(src, nd.left);
        int r = absorb(src, nd.right);
        Node copy;
        copy.var = nd.var;
        copy.left = l;
        copy.right = r;
        nodes_.push_back(copy);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int add_leaf(bool label) {
        Node nd;
        nd.label = label;
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int grow(int n, double p_leaf, int bound, int& leaves, RandomSource& rng) {
        if (leaves > bound) return -1;
        if (rng.next_double() < p_leaf) {
            ++leaves;
            if (leaves > bound) return -1;
            return add_leaf(rng.next_bit());
        }
        int var = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int l = grow(n, p_leaf, bound, leaves, rng);
        if (l < 0) return -1;
        int r = grow(n, p_leaf, bound, leaves, rng);
        if (r < 0) return -1;
        Node nd;
        nd.var = var;
        nd.left = l;
        nd.right = r;
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int count_leaves(int idx) const {
        const Node& nd = nodes_[static_cast<size_t>(idx)];
        if (nd.var < 0) return 1;
        return count_leaves(nd.left) + count_leaves(nd.right);
    }

    void collect_masks(int idx, std::uint32_t mask, std::vector<std::uint32_t>& out) const {
        const Node& nd = nodes_[static_cast<size_t>(idx)];
        if (nd.var < 0) {
            out.push_back(mask);
            return;
        }
        collect_masks(nd.left, mask | (1u << nd.var), out);
        collect_masks(nd.right, mask | (1u << nd.var), out);
    }

    std::string format(int idx) const {
        const Node& nd = nodes_[static_cast<size_t>(idx)];
        if (nd.var < 0) return nd.label ? "1" : "0";
        return "(x" + std::to_string(nd.var + 1) + " " + format(nd.left) + " " + format(nd.right) + ")";
    }

    static void skip_ws(const std::string& s, size_t& pos) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\n' || s[pos] == '\t')) ++pos;
    }

    int parse_node(const std::string& s, size_t& pos, int n) {
        skip_ws(s, pos);
        require(pos < s.size(), "DecisionTree::parse: unexpected end");
        if (s[pos] == '0' || s[pos] == '1') return add_leaf(s[pos++] == '1');
        require(s[pos] == '(', "DecisionTree::parse: expected '(' or leaf");
        ++pos;
        skip_ws(s, pos);
        require(pos < s.size() && s[pos] == 'x', "DecisionTree::parse: expected variable");
        ++pos;
        size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        require(pos > start, "DecisionTree::parse: missing variable index");
        int var = std::stoi(s.substr(start, pos - start)) - 1;
        require(var >= 0 && var < n, "DecisionTree::parse: variable index out of range");
        int l = parse_node(s, pos, n);
        int r = parse_node(s, pos, n);
        skip_ws(s, pos);
        require(pos < s.size() && s[pos] == ')', "DecisionTree::parse: expected ')'");
        ++pos;
        Node nd;
        nd.var = var;
        nd.left = l;
        nd.right = r;
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int n_ = 0;
    int root_ = -1;
    std::vector<Node> nodes_;

    friend double tree_disagreement_uniform(const DecisionTree&, const DecisionTree&);
};

// Exact P_uniform(f(x) != g(x)) by a joint walk over both trees. All masses
// are dyadic with denominator at most 2^n, so doubles stay exact for n <= 20.
inline double tree_disagreement_uniform(const DecisionTree& f, const DecisionTree& g) {
    require(f.dimension() == g.dimension(), "tree_disagreement_uniform: dimension mismatch");

    struct Walker {
        const DecisionTree& a;
        const DecisionTree& b;
        double rec(int ai, int bi, std::uint32_t assigned, std::uint32_t values) const {
            const DecisionTree::Node& na = a.nodes_[static_cast<size_t>(ai)];
            if (na.var >= 0) {
                std::uint32_t bit = 1u << na.var;
                if (assigned & bit)
                    return rec((values & bit) ? na.right : na.left, bi, assigned, values);
                return 0.5 * rec(na.left, bi, assigned | bit, values) +
                       0.5 * rec(na.right, bi, assigned | bit, values | bit);
            }
            const DecisionTree::Node& nb = b.nodes_[static_cast<size_t>(bi)];
            if (nb.var >= 0) {
                std::uint32_t bit = 1u << nb.var;
                if (assigned & bit)
                    return rec(ai, (values & bit) ? nb.right : nb.left, assigned, values);
                return 0.5 * rec(ai, nb.left, assigned | bit, values) +
                       0.5 * rec(ai, nb.right, assigned | bit, values | bit);
            }
            return na.label != nb.label ? 1.0 : 0.0;
        }
    };
    Walker w{f, g};
    return w.rec(f.root_, g.root_, 0, 0);
}

// P_uniform(Leaf(f, x) n Leaf(g, x)): inputs must match x on every distinct
// variable tested by either path.
inline double leaf_overlap_probability(const DecisionTree& f, const DecisionTree& g,
                                       const InputPoint& x) {
    std::uint32_t joint = f.path_var_mask(x) | g.path_var_mask(x);
    return std::ldexp(1.0, -std::popcount(joint));
}

// The worked evaluation example: a depth-3 tree over {0,1}^4 whose value at
// 0110 is 1 via the path x4 -> x1 -> x2.
inline DecisionTree figure_tree() {
    return DecisionTree::parse(4, "(x4 (x1 (x2 0 1) 1) (x2 1 0))");
}

}  // namespace bdgame
