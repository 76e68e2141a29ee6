#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/vc.hpp"

namespace bdgame {

enum class PriorKind { Uniform, MaxEntropy, Canonical };

inline const char* prior_name(PriorKind k) {
    switch (k) {
        case PriorKind::Uniform: return "uniform";
        case PriorKind::MaxEntropy: return "max-entropy";
        default: return "canonical";
    }
}

struct Prior {
    PriorKind kind = PriorKind::Uniform;
    std::vector<double> weights;  // over class members, sums to 1

    void validate() const {
        double sum = 0.0;
        for (double w : weights) {
            require(w >= 0.0, "Prior: negative weight");
            sum += w;
        }
        require(std::abs(sum - 1.0) <= 1e-12, "Prior: weights must sum to 1");
    }
};

// Expected entropy of the labeling an m-sample from D induces on a
// prior-drawn hypothesis. The entropy of a tuple depends only on its set of
// distinct points, so the expectation is decomposed over those sets with
// inclusion-exclusion weights.
class LabelingEntropyModel {
public:
    LabelingEntropyModel(const FunctionClass& cls, const InputDistribution& D, int m)
        : size_(cls.size()) {
        require(m >= 1, "LabelingEntropyModel: m must be >= 1");
        require(D.dimension() == cls.dimension(), "LabelingEntropyModel: dimension mismatch");
        const auto& support = D.support();
        size_t max_pts = std::min<size_t>(static_cast<size_t>(m), support.size());

        std::uint64_t subset_count = 0;
        for (size_t k = 1; k <= max_pts; ++k) {
            std::uint64_t c = 1;
            for (size_t i = 0; i < k; ++i) c = c * (support.size() - i) / (i + 1);
            subset_count += c;
            require_budget(subset_count <= (std::uint64_t(1) << 20),
                           "LabelingEntropyModel: support/m budget exceeded");
        }

        for (size_t k = 1; k <= max_pts; ++k) {
            detail::for_each_subset(support.size(), k, [&](const std::vector<size_t>& idx) {
                add_subset(cls, D, m, support, idx);
                return false;
            });
        }
    }

    std::uint64_t class_size() const { return size_; }

    double phi(const std::vector<double>& p) const {
        double total = 0.0;
        for (const Subset& s : subsets_) {
            if (s.weight <= 0.0) continue;
            std::vector<double> q(s.num_blocks, 0.0);
            for (std::uint64_t f = 0; f < size_; ++f) q[s.block_of[f]] += p[f];
            double h = 0.0;
            for (double v : q)
                if (v > 0.0) h -= v * std::log(v);
            total += s.weight * h;
        }
        return total;
    }

    // E over samples of -log P(h labels the sample like f does).
    double logloss(const std::vector<double>& p, std::uint64_t f) const {
        double total = 0.0;
        for (const Subset& s : subsets_) {
            if (s.weight <= 0.0) continue;
            double q = 0.0;
            for (std::uint64_t g = 0; g < size_; ++g)
                if (s.block_of[g] == s.block_of[f]) q += p[g];
            total += s.weight * -std::log(std::max(q, 1e-300));
        }
        return total;
    }

    std::vector<double> gradient(const std::vector<double>& p) const {
        std::vector<double> grad(size_, 0.0);
        for (const Subset& s : subsets_) {
            if (s.weight <= 0.0) continue;
            std::vector<double> q(s.num_blocks, 0.0);
            for (std::uint64_t f = 0; f < size_; ++f) q[s.block_of[f]] += p[f];
            for (std::uint64_t f = 0; f < size_; ++f)
                grad[f] += s.weight * (-std::log(std::max(q[s.block_of[f]], 1e-300)) - 1.0);
        }
        return grad;
    }

private:
    struct Subset {
        double weight = 0.0;
        std::vector<std::uint16_t> block_of;
        std::uint16_t num_blocks = 0;
    };

    void add_subset(const FunctionClass& cls, const InputDistribution& D, int m,
                    const std::vector<std::uint32_t>& support, const std::vector<size_t>& idx) {
        // P(the m draws cover exactly this point set), by inclusion-exclusion.
        size_t k = idx.size();
        double weight = 0.0;
        for (std::uint32_t sub = 0; sub < (1u << k); ++sub) {
            double mass = 0.0;
            for (size_t i = 0; i < k; ++i)
                if ((sub >> i) & 1u) mass += D.mass(support[idx[i]]);
            int sign = (std::popcount(~sub & ((1u << k) - 1u)) % 2 == 0) ? 1 : -1;
            weight += sign * std::pow(mass, m);
        }
        if (weight <= 0.0) return;

        std::vector<InputPoint> pts;
        for (size_t i : idx) pts.emplace_back(support[i], cls.dimension());

        Subset s;
        s.weight = weight;
        s.block_of.resize(size_);
        std::map<std::uint32_t, std::uint16_t> block_ids;
        for (std::uint64_t f = 0; f < size_; ++f) {
            std::uint32_t mask = cls.labeling_over(f, pts);
            auto [it, fresh] = block_ids.emplace(mask, static_cast<std::uint16_t>(block_ids.size()));
            (void)fresh;
            s.block_of[f] = it->second;
        }
        s.num_blocks = static_cast<std::uint16_t>(block_ids.size());
        subsets_.push_back(std::move(s));
    }

    std::uint64_t size_;
    std::vector<Subset> subsets_;
};

struct MaxEntropyResult {
    Prior prior;
    double entropy = 0.0;  // achieved expected labeling entropy
    int iterations = 0;
};

// Entropic mirror ascent on the simplex with backtracking; stops when the
// entropy gain per step drops below 1e-9 (10^5 step cap).
inline MaxEntropyResult build_max_entropy_prior(const FunctionClass& cls,
                                                const InputDistribution& D, int m) {
    require_budget(cls.size() <= (std::uint64_t(1) << 16),
                   "build_prior: max-entropy budget is 2^16 members");
    LabelingEntropyModel model(cls, D, m);
    size_t n = cls.size();
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    double eta = 1.0;
    double phi = model.phi(p);
    int iter = 0;
    for (; iter < 100000; ++iter) {
        std::vector<double> grad = model.gradient(p);
        double gmax = *std::max_element(grad.begin(), grad.end());
        std::vector<double> next(n);
        double next_phi = phi;
        bool accepted = false;
        while (eta > 1e-12) {
            double z = 0.0;
            for (size_t i = 0; i < n; ++i) {
                next[i] = p[i] * std::exp(eta * (grad[i] - gmax));
                z += next[i];
            }
            for (size_t i = 0; i < n; ++i) next[i] /= z;
            next_phi = model.phi(next);
            if (next_phi >= phi - 1e-15) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
        double gain = next_phi - phi;
        p.swap(next);
        phi = next_phi;
        eta = std::min(eta * 1.25, 64.0);
        if (gain < 1e-9 && iter > 8) break;
    }
    MaxEntropyResult res;
    res.prior.kind = PriorKind::MaxEntropy;
    res.prior.weights = std::move(p);
    res.entropy = phi;
    res.iterations = iter;
    return res;
}

// The resampling prior: draw m points from D, pick a uniformly random
// realized labeling of them, keep the lowest-index consistent member.
// Estimated from `draws` runs of the process.
inline Prior build_canonical_prior(const FunctionClass& cls, const InputDistribution& D, int m,
                                   RandomSource& rng, std::uint64_t draws = 200000) {
    require_budget(cls.size() <= kMaxClassSize, "build_prior: class too large");
    require(m >= 1 && draws >= 1, "build_canonical_prior: bad parameters");
    std::vector<double> w(cls.size(), 0.0);
    std::vector<InputPoint> pts;
    for (std::uint64_t t = 0; t < draws; ++t) {
        pts.clear();
        for (int i = 0; i < m; ++i) pts.push_back(D.sample(rng));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::map<std::uint32_t, std::uint64_t> labelings;  // labeling -> lowest member
        for (std::uint64_t f = 0; f < cls.size(); ++f)
            labelings.emplace(cls.labeling_over(f, pts), f);
        std::uint64_t pick = rng.next_below(labelings.size());
        auto it = labelings.begin();
        std::advance(it, static_cast<long>(pick));
        w[it->second] += 1.0;
    }
    for (double& v : w) v /= static_cast<double>(draws);
    Prior prior;
    prior.kind = PriorKind::Canonical;
    prior.weights = std::move(w);
    return prior;
}

inline Prior build_uniform_prior(const FunctionClass& cls) {
    require_budget(cls.size() <= kMaxClassSize, "build_prior: class too large");
    Prior p;
    p.kind = PriorKind::Uniform;
    p.weights.assign(cls.size(), 1.0 / static_cast<double>(cls.size()));
    return p;
}

inline Prior build_prior(PriorKind kind, const FunctionClass& cls, const InputDistribution& D,
                         int m, RandomSource& rng, std::uint64_t canonical_draws = 200000) {
    switch (kind) {
        case PriorKind::Uniform: return build_uniform_prior(cls);
        case PriorKind::MaxEntropy: return build_max_entropy_prior(cls, D, m).prior;
        default: return build_canonical_prior(cls, D, m, rng, canonical_draws);
    }
}

}  // namespace bdgame
