#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/priors.hpp"

namespace bdgame {

// Posterior over class members centered on a received function: weight
// proportional to prior(h) * exp(-m * dist(h, center)) with dist the D-mass
// of disagreement. Weights are computed exhaustively in log space.
struct BoltzmannPosterior {
    int m = 0;
    std::vector<double> weights;    // normalized
    std::vector<double> distances;  // dist(h, center) per member
    double log_normalizer = 0.0;    // log sum_h prior(h) exp(-m dist)

    std::uint64_t sample(RandomSource& rng) const {
        double u = rng.next_double();
        double acc = 0.0;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

    double expected_distance() const {
        double e = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) e += weights[i] * distances[i];
        return e;
    }
};

inline BoltzmannPosterior boltzmann_posterior(const Prior& prior, int m, const FunctionClass& cls,
                                              const TruthTable& center,
                                              const InputDistribution& D) {
    require(m >= 0, "boltzmann_posterior: m must be >= 0");
    require(prior.weights.size() == cls.size(), "boltzmann_posterior: prior/class size mismatch");
    require(center.dimension() == cls.dimension() && D.dimension() == cls.dimension(),
            "boltzmann_posterior: dimension mismatch");

    BoltzmannPosterior post;
    post.m = m;
    size_t n = prior.weights.size();
    post.distances.resize(n);
    std::vector<double> logw(n, -std::numeric_limits<double>::infinity());
    for (size_t h = 0; h < n; ++h) {
        double d;
        if (const TruthTable* t = cls.cached_table(h)) {
            d = distance(*t, center, D);
        } else {
            d = 0.0;
            for (std::uint32_t x : D.support()) {
                InputPoint p(x, cls.dimension());
                if (cls.evaluate(h, p) != center.evaluate(p)) d += D.mass(x);
            }
        }
        post.distances[h] = d;
        if (prior.weights[h] > 0.0) logw[h] = std::log(prior.weights[h]) - m * d;
    }
    double peak = *std::max_element(logw.begin(), logw.end());
    require(std::isfinite(peak), "boltzmann_posterior: prior has empty support");
    double z = 0.0;
    post.weights.resize(n);
    for (size_t h = 0; h < n; ++h) {
        post.weights[h] = std::exp(logw[h] - peak);
        z += post.weights[h];
    }
    for (double& w : post.weights) w /= z;
    post.log_normalizer = peak + std::log(z);
    return post;
}

inline BoltzmannPosterior boltzmann_posterior(const Prior& prior, int m, const FunctionClass& cls,
                                              std::uint64_t center_index,
                                              const InputDistribution& D) {
    return boltzmann_posterior(prior, m, cls, cls.table_of(center_index), D);
}

// E_{h~Q_f} dist(h, f), the posterior's own error when centered at f.
inline double expected_posterior_distance(const Prior& prior, int m, const FunctionClass& cls,
                                          std::uint64_t f, const InputDistribution& D) {
    return boltzmann_posterior(prior, m, cls, f, D).expected_distance();
}

}  // namespace bdgame
