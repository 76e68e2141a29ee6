#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/stats.hpp"

namespace bdgame {

using Sample = std::vector<LabeledExample>;

enum class PredictorKind { OneInclusion, Erm };

inline const char* predictor_name(PredictorKind k) {
    return k == PredictorKind::OneInclusion ? "one-inclusion" : "erm";
}

namespace detail {

// Orient an undirected graph minimizing the maximum out-degree (an edge's
// tail pays for it). Feasibility of a bound k is a max-flow instance:
// source -> edge (1), edge -> endpoints (1), vertex -> sink (k). Everything
// is iterated in a fixed order, so the orientation is deterministic.
class DegreeOrienter {
public:
    DegreeOrienter(size_t num_vertices, const std::vector<std::pair<int, int>>& edges)
        : nv_(num_vertices), edges_(edges) {}

    // orientation[e] = tail endpoint of edge e (edge points away from it).
    std::vector<int> orient() {
        for (int k = 0;; ++k) {
            std::vector<int> tails;
            if (feasible(k, tails)) return tails;
        }
    }

private:
    bool feasible(int k, std::vector<int>& tails) {
        size_t ne = edges_.size();
        size_t source = 0, sink = 1 + ne + nv_;
        size_t nodes = sink + 1;
        struct Arc {
            size_t to;
            int cap;
            size_t rev;
        };
        std::vector<std::vector<Arc>> g(nodes);
        auto add_arc = [&](size_t a, size_t b, int cap) {
            g[a].push_back({b, cap, g[b].size()});
            g[b].push_back({a, 0, g[a].size() - 1});
        };
        for (size_t e = 0; e < ne; ++e) {
            add_arc(source, 1 + e, 1);
            add_arc(1 + e, 1 + ne + static_cast<size_t>(edges_[e].first), 1);
            add_arc(1 + e, 1 + ne + static_cast<size_t>(edges_[e].second), 1);
        }
        for (size_t v = 0; v < nv_; ++v) add_arc(1 + ne + v, sink, k);

        // Dinic
        int flow = 0;
        std::vector<int> level(nodes), it(nodes);
        auto bfs = [&] {
            std::fill(level.begin(), level.end(), -1);
            std::vector<size_t> q{source};
            level[source] = 0;
            for (size_t h = 0; h < q.size(); ++h) {
                size_t u = q[h];
                for (const Arc& a : g[u])
                    if (a.cap > 0 && level[a.to] < 0) {
                        level[a.to] = level[u] + 1;
                        q.push_back(a.to);
                    }
            }
            return level[sink] >= 0;
        };
        std::function<int(size_t, int)> dfs = [&](size_t u, int f) -> int {
            if (u == sink) return f;
            for (int& i = it[u]; i < static_cast<int>(g[u].size()); ++i) {
                Arc& a = g[u][static_cast<size_t>(i)];
                if (a.cap > 0 && level[a.to] == level[u] + 1) {
                    int got = dfs(a.to, std::min(f, a.cap));
                    if (got > 0) {
                        a.cap -= got;
                        g[a.to][a.rev].cap += got;
                        return got;
                    }
                }
            }
            return 0;
        };
        while (bfs()) {
            std::fill(it.begin(), it.end(), 0);
            while (int f = dfs(source, 1 << 30)) flow += f;
        }
        if (static_cast<size_t>(flow) != ne) return false;

        tails.assign(ne, -1);
        for (size_t e = 0; e < ne; ++e)
            for (const Arc& a : g[1 + e])
                if (a.to != source && a.cap == 0 && a.to >= 1 + ne) {
                    tails[e] = static_cast<int>(a.to - 1 - ne);
                    break;
                }
        return true;
    }

    size_t nv_;
    const std::vector<std::pair<int, int>>& edges_;
};

struct Restriction {
    std::vector<InputPoint> points;        // distinct, sorted by index
    std::vector<std::uint32_t> labelings;  // realized labelings, dedup'd
    std::vector<std::uint64_t> lowest_member;
};

inline Restriction restrict_class(const FunctionClass& cls, const Sample& sample,
                                  const InputPoint& x) {
    Restriction r;
    std::vector<std::uint32_t> idx;
    idx.push_back(x.bits);
    for (const LabeledExample& ex : sample) {
        require(ex.point.n == x.n, "predict: dimension mismatch in sample");
        idx.push_back(ex.point.bits);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    require(idx.size() <= 32, "predict: too many distinct points");
    for (std::uint32_t b : idx) r.points.emplace_back(b, x.n);

    std::map<std::uint32_t, std::uint64_t> seen;  // labeling -> lowest member
    for (std::uint64_t i = 0; i < cls.size(); ++i) {
        std::uint32_t mask = cls.labeling_over(i, r.points);
        seen.emplace(mask, i);
    }
    // Order vertices by lowest realizing member index.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> order;
    for (const auto& [mask, member] : seen) order.emplace_back(member, mask);
    std::sort(order.begin(), order.end());
    for (const auto& [member, mask] : order) {
        r.labelings.push_back(mask);
        r.lowest_member.push_back(member);
    }
    return r;
}

}  // namespace detail

// The 1-inclusion prediction strategy: restrict the class to the sample
// points plus x, orient the graph of realized labelings (edges join
// labelings differing at one point) with minimum max out-degree, and at an
// ambiguous pair predict the label the orientation points at. The
// orientation depends only on the point set, never on the labels.
inline bool one_inclusion_predict(const FunctionClass& cls, const Sample& sample,
                                  const InputPoint& x, RandomSource& /*rng*/) {
    require_budget(cls.size() <= kMaxClassSize, "one_inclusion_predict: class too large");
    detail::Restriction r = detail::restrict_class(cls, sample, x);
    size_t nv = r.labelings.size();

    size_t x_coord = static_cast<size_t>(
        std::lower_bound(r.points.begin(), r.points.end(), x,
                         [](const InputPoint& a, const InputPoint& b) { return a.bits < b.bits; }) -
        r.points.begin());

    // Sample constraints on coordinates (conflicting duplicates leave no
    // consistent member and are a caller bug).
    std::uint32_t constrained = 0, required = 0;
    for (const LabeledExample& ex : sample) {
        size_t c = static_cast<size_t>(
            std::lower_bound(r.points.begin(), r.points.end(), ex.point,
                             [](const InputPoint& a, const InputPoint& b) { return a.bits < b.bits; }) -
            r.points.begin());
        std::uint32_t bit = 1u << c;
        if ((constrained & bit) && ((required >> c) & 1u) != (ex.label ? 1u : 0u))
            throw ContractError("one_inclusion_predict: sample inconsistent with itself");
        constrained |= bit;
        if (ex.label) required |= bit;
    }

    std::vector<size_t> consistent;
    for (size_t v = 0; v < nv; ++v)
        if ((r.labelings[v] & constrained) == (required & constrained)) consistent.push_back(v);
    if (consistent.empty())
        throw ContractError("one_inclusion_predict: no class member is consistent with the sample");

    bool first_label = (r.labelings[consistent[0]] >> x_coord) & 1u;
    bool all_agree = true;
    for (size_t v : consistent)
        if ((((r.labelings[v] >> x_coord) & 1u) != 0) != first_label) all_agree = false;
    if (all_agree) return first_label;

    // Exactly two consistent labelings remain and they differ at x's
    // coordinate: an edge of the graph.
    std::vector<std::pair<int, int>> edges;
    for (size_t a = 0; a < nv; ++a)
        for (size_t b = a + 1; b < nv; ++b) {
            std::uint32_t diff = r.labelings[a] ^ r.labelings[b];
            if (diff && (diff & (diff - 1)) == 0)
                edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    detail::DegreeOrienter orienter(nv, edges);
    std::vector<int> tails = orienter.orient();

    size_t u = consistent[0], w = consistent[1];
    for (size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        if ((static_cast<size_t>(a) == u && static_cast<size_t>(b) == w) ||
            (static_cast<size_t>(a) == w && static_cast<size_t>(b) == u)) {
            size_t head = static_cast<size_t>(tails[e]) == static_cast<size_t>(a)
                              ? static_cast<size_t>(b)
                              : static_cast<size_t>(a);
            return (r.labelings[head] >> x_coord) & 1u;
        }
    }
    throw ContractError("one_inclusion_predict: ambiguous pair is not an edge");
}

// Empirical risk minimization: the first sample-consistent member in an
// rng-shuffled enumeration order, evaluated at x.
inline bool erm_predict(const FunctionClass& cls, const Sample& sample, const InputPoint& x,
                        RandomSource& rng) {
    require_budget(cls.size() <= (std::uint64_t(1) << 16), "erm_predict: class too large");
    std::vector<std::uint32_t> order(cls.size());
    std::iota(order.begin(), order.end(), 0u);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);
    for (std::uint32_t i : order) {
        bool ok = true;
        for (const LabeledExample& ex : sample)
            if (cls.evaluate(i, ex.point) != ex.label) {
                ok = false;
                break;
            }
        if (ok) return cls.evaluate(i, x);
    }
    throw ContractError("erm_predict: no class member is consistent with the sample");
}

inline bool predict(PredictorKind kind, const FunctionClass& cls, const Sample& sample,
                    const InputPoint& x, RandomSource& rng) {
    return kind == PredictorKind::OneInclusion ? one_inclusion_predict(cls, sample, x, rng)
                                               : erm_predict(cls, sample, x, rng);
}

struct ErrorRateEstimate {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    WilsonInterval wilson;
};

// Misprediction frequency of a sample-size-(m-1) strategy over fresh samples
// and x ~ D, with a 95% Wilson interval.
inline ErrorRateEstimate measure_error_rate(PredictorKind kind, const FunctionClass& cls,
                                            std::uint64_t target, const InputDistribution& D,
                                            int m, std::uint64_t trials, const RandomSource& rng) {
    require(m >= 1, "measure_error_rate: m must be >= 1");
    require(trials >= 1, "measure_error_rate: trials must be >= 1");
    TruthTable f = cls.table_of(target);
    ErrorRateEstimate est;
    est.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomSource r = rng.fork(t);
        Sample sample;
        sample.reserve(static_cast<size_t>(m) - 1);
        for (int i = 0; i + 1 < m; ++i) sample.push_back(sample_example(f, D, r));
        InputPoint x = D.sample(r);
        if (predict(kind, cls, sample, x, r) != f.evaluate(x)) ++est.errors;
    }
    est.rate = static_cast<double>(est.errors) / static_cast<double>(trials);
    est.wilson = wilson95(est.errors, trials);
    return est;
}

}  // namespace bdgame
