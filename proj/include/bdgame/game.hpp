#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "bdgame/attackers.hpp"
#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/defenders.hpp"
#include "bdgame/priors.hpp"
#include "bdgame/representation.hpp"
#include "bdgame/stats.hpp"

namespace bdgame {

enum class GameMode { Standard, RuleViolation, AverageCase };

inline const char* mode_name(GameMode m) {
    switch (m) {
        case GameMode::Standard: return "standard";
        case GameMode::RuleViolation: return "rule-violation";
        default: return "average-case";
    }
}

struct GameConfig {
    double eps = 0.1;
    double delta = 0.1;  // reporting target, handed to the defender as its confidence budget
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    GameMode mode = GameMode::Standard;
    bool grant_exact_distribution = true;

    void validate() const {
        require(eps > 0.0, "GameConfig: eps must be positive");
        require(trials >= 1, "GameConfig: trials must be >= 1");
    }
};

struct RoundTranscript {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    Representation f;
    InputPoint xstar;
    Representation fstar;
    bool claimed_valid = false;
    bool valid = false;

    bool backdoor_branch = false;
    InputPoint xprime;
    bool label = false;
    Verdict verdict = Verdict::Acc;
    bool win = false;

    bool skipped = false;
    std::string skip_reason;

    std::uint64_t oracle_calls = 0;
    std::uint64_t defender_tree_visits = 0;
    std::uint64_t baseline_tree_visits = 0;
};

namespace detail {

inline std::uint64_t sample_prior_index(const Prior& prior, RandomSource& rng) {
    double u = rng.next_double();
    double acc = 0.0;
    for (size_t i = 0; i + 1 < prior.weights.size(); ++i) {
        acc += prior.weights[i];
        if (u < acc) return i;
    }
    return prior.weights.size() - 1;
}

}  // namespace detail

// One full round: setup, trigger, backdoor, branch coin, detection, win
// accounting. An invalid backdoored function loses the backdoor branch for
// the attacker no matter what the verdict was.
inline RoundTranscript play_round(const Attacker& attacker, const Defender& defender,
                                  const GameConfig& config, std::uint64_t trial,
                                  const Prior* average_case_prior = nullptr) {
    config.validate();
    RoundTranscript t;
    t.trial = trial;
    t.seed = config.seed;
    RandomSource root(config.seed, trial);
    t.stream = root.stream_id();

    RandomSource r_setup = root.fork(1);
    RandomSource r_trigger = root.fork(2);
    RandomSource r_backdoor = root.fork(3);
    RandomSource r_branch = root.fork(4);
    RandomSource r_honest = root.fork(5);
    RandomSource r_defender = root.fork(6);
    RandomSource r_oracle = root.fork(7);

    const InputDistribution& D = attacker.input_distribution();

    try {
        BackdoorProposal proposal;
        if (config.mode == GameMode::RuleViolation) {
            require(attacker.trigger_before_function(),
                    "play_round: rule-violation mode needs a trigger-first attacker");
            t.xstar = D.sample(r_trigger);
            auto [f, prop] = attacker.choose_pair_after_trigger(t.xstar, r_setup);
            t.f = std::move(f);
            proposal = std::move(prop);
        } else {
            if (config.mode == GameMode::AverageCase) {
                require(average_case_prior != nullptr, "play_round: average-case needs a prior");
                auto cls = attacker.function_class();
                require(cls != nullptr, "play_round: average-case needs an enumerable class");
                t.f = Representation::of_member(cls,
                                                detail::sample_prior_index(*average_case_prior, r_setup));
            } else {
                t.f = attacker.choose_original(r_setup);
            }
            t.xstar = D.sample(r_trigger);
            proposal = attacker.plant_backdoor(t.f, t.xstar, r_backdoor);
        }
        t.fstar = std::move(proposal.fstar);
        t.claimed_valid = proposal.claimed_valid;
        t.valid = representation_valid_backdoor(t.f, t.fstar, D, config.eps, t.xstar);
        require(!t.claimed_valid || t.valid,
                "play_round: attacker claimed validity but the check fails");
    } catch (const AttackUnavailableError& e) {
        t.skipped = true;
        t.skip_reason = e.what();
        return t;
    }

    t.backdoor_branch = r_branch.next_bit();
    const Representation& presented = t.backdoor_branch ? t.fstar : t.f;
    t.xprime = t.backdoor_branch ? t.xstar : D.sample(r_honest);
    t.label = presented.evaluate(t.xprime);

    if (presented.decision_tree() != nullptr) presented.evaluate(t.xprime, &t.baseline_tree_visits);

    ExampleOracle oracle(presented, D, r_oracle);
    DetectionInput input{presented,
                         t.xprime,
                         t.label,
                         config.eps,
                         config.delta,
                         oracle,
                         attacker.function_class(),
                         config.grant_exact_distribution ? &D : nullptr,
                         r_defender,
                         &t.defender_tree_visits};
    t.verdict = defender.detect(input);
    t.oracle_calls = oracle.calls();

    t.win = t.backdoor_branch ? (t.verdict == Verdict::Rej || !t.valid) : (t.verdict == Verdict::Acc);
    return t;
}

struct ConfidenceEstimate {
    std::uint64_t wins = 0;
    std::uint64_t trials = 0;
    std::uint64_t skipped = 0;
    double point = 0.0;
    WilsonInterval wilson;

    std::uint64_t honest_rounds = 0;
    std::uint64_t honest_wins = 0;
    std::uint64_t backdoor_rounds = 0;
    std::uint64_t backdoor_wins = 0;
    std::uint64_t valid_backdoors = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t defender_tree_visits = 0;
    std::uint64_t baseline_tree_visits = 0;
};

inline unsigned worker_count() {
    if (const char* env = std::getenv("BDGAME_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Independent seeded rounds; aggregation is count-based so the result does
// not depend on the number of workers.
inline ConfidenceEstimate estimate_confidence(const Attacker& attacker, const Defender& defender,
                                              const GameConfig& config,
                                              const Prior* average_case_prior = nullptr) {
    config.validate();
    unsigned workers = worker_count();
    std::vector<ConfidenceEstimate> partial(workers);
    std::atomic<std::uint64_t> next{0};
    constexpr std::uint64_t kChunk = 64;

    auto run = [&](unsigned w) {
        ConfidenceEstimate& acc = partial[w];
        for (;;) {
            std::uint64_t begin = next.fetch_add(kChunk);
            if (begin >= config.trials) break;
            std::uint64_t end = std::min(config.trials, begin + kChunk);
            for (std::uint64_t trial = begin; trial < end; ++trial) {
                RoundTranscript t = play_round(attacker, defender, config, trial, average_case_prior);
                if (t.skipped) {
                    ++acc.skipped;
                    continue;
                }
                ++acc.trials;
                acc.wins += t.win ? 1 : 0;
                acc.oracle_calls += t.oracle_calls;
                acc.defender_tree_visits += t.defender_tree_visits;
                acc.baseline_tree_visits += t.baseline_tree_visits;
                if (t.backdoor_branch) {
                    ++acc.backdoor_rounds;
                    acc.backdoor_wins += t.win ? 1 : 0;
                    acc.valid_backdoors += t.valid ? 1 : 0;
                } else {
                    ++acc.honest_rounds;
                    acc.honest_wins += t.win ? 1 : 0;
                }
            }
        }
    };

    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (std::thread& th : pool) th.join();
    }

    ConfidenceEstimate total;
    for (const ConfidenceEstimate& p : partial) {
        total.wins += p.wins;
        total.trials += p.trials;
        total.skipped += p.skipped;
        total.honest_rounds += p.honest_rounds;
        total.honest_wins += p.honest_wins;
        total.backdoor_rounds += p.backdoor_rounds;
        total.backdoor_wins += p.backdoor_wins;
        total.valid_backdoors += p.valid_backdoors;
        total.oracle_calls += p.oracle_calls;
        total.defender_tree_visits += p.defender_tree_visits;
        total.baseline_tree_visits += p.baseline_tree_visits;
    }
    require(total.trials >= 1, "estimate_confidence: every round was skipped");
    total.point = static_cast<double>(total.wins) / static_cast<double>(total.trials);
    total.wilson = wilson95(total.wins, total.trials);
    return total;
}

// Corollary-style average-case game: the original function is drawn from the
// prior each round instead of adversarially; everything else is unchanged.
inline ConfidenceEstimate average_case_confidence(const Prior& prior, const Attacker& attacker,
                                                  const Defender& defender,
                                                  const GameConfig& config) {
    GameConfig cfg = config;
    cfg.mode = GameMode::AverageCase;
    return estimate_confidence(attacker, defender, cfg, &prior);
}

}  // namespace bdgame
