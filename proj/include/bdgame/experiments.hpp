#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdgame/attackers.hpp"
#include "bdgame/boltzmann.hpp"
#include "bdgame/defenders.hpp"
#include "bdgame/exact_oracle.hpp"
#include "bdgame/fixtures.hpp"
#include "bdgame/game.hpp"
#include "bdgame/ggm_prf.hpp"
#include "bdgame/priors.hpp"
#include "bdgame/stats.hpp"

namespace bdgame {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentOutput {
    std::string experiment;
    std::string csv;  // header plus rows
    nlohmann::json summary;
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = RandomSource::mix(base + 0x1000003ull);
    h = RandomSource::mix(h ^ (a + 0x9E3779B97F4A7C15ull));
    h = RandomSource::mix(h ^ (b + 0xD1B54A32D192ED03ull));
    h = RandomSource::mix(h ^ (c + 0x2545F4914F6CDD1Dull));
    return h;
}

inline const char* kCsvBase = "experiment,attacker,defender,n,d,eps,delta,trials,wins,point,ci_lo,ci_hi";

inline std::string csv_base_row(const std::string& experiment, const std::string& attacker,
                                const std::string& defender, int n, int d, double eps,
                                double delta, const ConfidenceEstimate& est) {
    std::string row = experiment + "," + attacker + "," + defender + "," + std::to_string(n) +
                      "," + std::to_string(d) + "," + fmt(eps) + "," + fmt(delta) + "," +
                      std::to_string(est.trials) + "," + std::to_string(est.wins) + "," +
                      fmt(est.point) + "," + fmt(est.wilson.lo) + "," + fmt(est.wilson.hi);
    return row;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// theorem1-sweep: majority-vote defense and shattered-set attack over a
// (d, eps) grid, with both theorem bound columns.
// ---------------------------------------------------------------------------

struct Theorem1Params {
    int n = 4;
    std::vector<int> d_list{2, 4};
    std::vector<double> eps_list{0.01, 0.005};
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
};

inline ExperimentOutput run_theorem1_sweep(const Theorem1Params& p) {
    require(p.trials >= 100, "theorem1-sweep requires trials >= 100 for interval validity");
    ExperimentOutput out;
    out.experiment = "theorem1-sweep";
    out.csv = std::string(detail::kCsvBase) + ",check_lower,check_upper\n";
    nlohmann::json cells = nlohmann::json::array();

    std::uint64_t cell_idx = 0;
    for (int d : p.d_list) {
        require((std::uint64_t(1) << p.n) >= static_cast<std::uint64_t>(d),
                "theorem1-sweep requires 2^n >= d");
        require(d >= 2, "theorem1-sweep requires d >= 2 (the attack needs a shattered pair)");
        auto cls = all_functions_on(p.n, first_points(p.n, d));
        ShatterResult sh = is_shattered(*cls, first_points(p.n, d));
        require(sh.shattered, "theorem1-sweep: support set must be shattered");

        for (double eps : p.eps_list) {
            require(eps > 0.0 && eps < 1.0, "theorem1-sweep requires 0 < eps < 1");
            ShatteredSetAttack attacker(cls, eps, *sh.witness);
            double bound_lower = std::max(0.5, 1.0 - 15.0 * d * eps);
            double bound_upper = 1.0 - (d - 1) * eps / 2.0;
            double delta_cell = std::min(15.0 * d * eps, 0.5);
            bool in_regime = d * eps <= 1.0 / 30.0;

            std::vector<std::shared_ptr<Defender>> roster;
            roster.push_back(std::make_shared<MajorityVoteDefender>(PredictorKind::OneInclusion));
            roster.push_back(std::make_shared<MajorityVoteDefender>(PredictorKind::Erm));
            roster.push_back(
                std::make_shared<BoltzmannDefender>(build_uniform_prior(*cls), PriorKind::Uniform));
            roster.push_back(std::make_shared<TrivialAcceptDefender>());
            roster.push_back(std::make_shared<RandomGuessDefender>());

            for (size_t di = 0; di < roster.size(); ++di) {
                GameConfig cfg;
                cfg.eps = eps;
                cfg.delta = delta_cell;
                cfg.trials = p.trials;
                cfg.seed = detail::derive_seed(p.seed, cell_idx, di);
                ConfidenceEstimate est = estimate_confidence(attacker, *roster[di], cfg);

                out.csv += detail::csv_base_row(out.experiment, attacker.name(),
                                                roster[di]->name(), p.n, d, eps, delta_cell, est) +
                           "," + detail::fmt(bound_lower) + "," + detail::fmt(bound_upper) + "\n";

                nlohmann::json cell;
                cell["d"] = d;
                cell["eps"] = eps;
                cell["defender"] = roster[di]->name();
                cell["point"] = est.point;
                cell["ci"] = {est.wilson.lo, est.wilson.hi};
                cell["bound_lower"] = bound_lower;
                cell["bound_upper"] = bound_upper;

                char name[128];
                bool is_hlw_vote = di == 0;
                if (is_hlw_vote && in_regime) {
                    std::snprintf(name, sizeof(name), "theorem1-lower d=%d eps=%g", d, eps);
                    bool pass = est.wilson.hi >= bound_lower;
                    out.checks.push_back({name, pass,
                                          detail::fmt("point %.6g vs bound %.6g (CI-adjusted)",
                                                      est.point, bound_lower)});
                }
                if (in_regime) {
                    std::snprintf(name, sizeof(name), "theorem1-upper d=%d eps=%g [%s]", d, eps,
                                  roster[di]->name().c_str());
                    bool pass = est.wilson.lo <= bound_upper;
                    out.checks.push_back({name, pass,
                                          detail::fmt("point %.6g vs ceiling %.6g (CI-adjusted)",
                                                      est.point, bound_upper)});
                }

                if (is_hlw_vote && in_regime) {
                    VoteParams vp = choose_vote_params(eps, delta_cell);
                    double acc_fail =
                        1.0 - static_cast<double>(est.honest_wins) /
                                  static_cast<double>(std::max<std::uint64_t>(1, est.honest_rounds));
                    double rej_fail =
                        1.0 - static_cast<double>(est.backdoor_wins) /
                                  static_cast<double>(
                                      std::max<std::uint64_t>(1, est.backdoor_rounds));
                    double acc_bound = 2.0 * d / vp.m;
                    double rej_bound = 4.0 * d / vp.m + std::exp(-vp.r / 200.0);
                    double acc_slack = 4.0 * binomial_sigma(acc_fail, std::max<std::uint64_t>(
                                                                          1, est.honest_rounds));
                    double rej_slack = 4.0 * binomial_sigma(rej_fail, std::max<std::uint64_t>(
                                                                          1, est.backdoor_rounds));
                    std::snprintf(name, sizeof(name), "theorem1-branch-acc d=%d eps=%g", d, eps);
                    out.checks.push_back({name, acc_fail <= acc_bound + acc_slack,
                                          detail::fmt("failure %.6g vs 2d/m=%.6g", acc_fail,
                                                      acc_bound)});
                    std::snprintf(name, sizeof(name), "theorem1-branch-rej d=%d eps=%g", d, eps);
                    out.checks.push_back({name, rej_fail <= rej_bound + rej_slack,
                                          detail::fmt("failure %.6g vs 4d/m+exp(-r/200)=%.6g",
                                                      rej_fail, rej_bound)});
                    cell["vote_m"] = vp.m;
                    cell["vote_r"] = vp.r;
                }
                cells.push_back(cell);
            }
            ++cell_idx;
        }
    }
    out.summary["experiment"] = out.experiment;
    out.summary["cells"] = cells;
    return out;
}

// ---------------------------------------------------------------------------
// boltzmann-sweep: posterior-resampling defense on the shattered-support
// testbed, average-case over the prior, with the exact posterior-error bound
// and the big-O shape fit.
// ---------------------------------------------------------------------------

struct BoltzmannSweepParams {
    int n = 3;
    int support = 4;  // class: all labelings of this many points; d = support
    std::vector<double> d_eps{0.005, 0.01, 0.02, 0.04, 0.08};
    std::vector<PriorKind> priors{PriorKind::Uniform, PriorKind::MaxEntropy, PriorKind::Canonical};
    std::uint64_t trials = 200000;
    std::uint64_t canonical_draws = 50000;
    std::uint64_t seed = 1;
};

inline ExperimentOutput run_boltzmann_sweep(const BoltzmannSweepParams& p) {
    require(p.support >= 2 && (std::uint64_t(1) << p.n) >= static_cast<std::uint64_t>(p.support),
            "boltzmann-sweep requires 2 <= support <= 2^n");
    require(p.d_eps.size() >= 2, "boltzmann-sweep requires at least 2 eps values");
    ExperimentOutput out;
    out.experiment = "boltzmann-sweep";
    out.csv = std::string(detail::kCsvBase) + ",m,failure,bound_rhs,shape\n";
    nlohmann::json sweeps = nlohmann::json::array();

    int d = p.support;
    auto cls = all_functions_on(p.n, first_points(p.n, d));
    std::vector<InputPoint> pts = first_points(p.n, d);

    for (PriorKind kind : p.priors) {
        std::vector<double> failures, shapes;
        nlohmann::json rows = nlohmann::json::array();
        for (size_t ei = 0; ei < p.d_eps.size(); ++ei) {
            double de = p.d_eps[ei];
            require(de > 0.0 && de < 1.0, "boltzmann-sweep requires 0 < d*eps < 1");
            double eps = de / d;
            require((d - 1) * eps < 1.0, "boltzmann-sweep: attack masses exceed 1");
            int m = BoltzmannDefender::temperature_for(eps);

            std::vector<double> masses(size_t(1) << p.n, 0.0);
            for (int i = 1; i < d; ++i) masses[pts[static_cast<size_t>(i)].bits] = eps;
            masses[pts[0].bits] = 1.0 - (d - 1) * eps;
            InputDistribution D(p.n, std::move(masses));

            FlipPointAttack attacker(cls, D, eps);
            RandomSource prior_rng(detail::derive_seed(p.seed, 17, static_cast<std::uint64_t>(kind), ei));
            Prior prior = build_prior(kind, *cls, D, m, prior_rng, p.canonical_draws);
            BoltzmannDefender defender(prior, kind);

            GameConfig cfg;
            cfg.eps = eps;
            cfg.delta = 0.5;
            cfg.trials = p.trials;
            cfg.seed = detail::derive_seed(p.seed, static_cast<std::uint64_t>(kind) + 100, ei);
            ConfidenceEstimate est = average_case_confidence(prior, attacker, defender, cfg);
            double failure = 1.0 - est.point;

            // Exact right side of the average-case bound.
            double avg_posterior_err = 0.0;
            for (std::uint64_t f = 0; f < cls->size(); ++f)
                if (prior.weights[f] > 0.0)
                    avg_posterior_err +=
                        prior.weights[f] * expected_posterior_distance(prior, m, *cls, f, D);
            double rhs = std::exp(2.0 * m * eps) * avg_posterior_err;
            double shape = de * std::log(1.0 / de);

            failures.push_back(std::max(failure, 0.5 / static_cast<double>(est.trials)));
            shapes.push_back(shape);

            out.csv += detail::csv_base_row(out.experiment, attacker.name(), defender.name(), p.n,
                                            d, eps, cfg.delta, est) +
                       "," + std::to_string(m) + "," + detail::fmt(failure) + "," +
                       detail::fmt(rhs) + "," + detail::fmt(shape) + "\n";

            char name[128];
            std::snprintf(name, sizeof(name), "b8-average-bound[%s] d*eps=%g", prior_name(kind), de);
            double slack = 4.0 * binomial_sigma(failure, est.trials);
            out.checks.push_back({name, failure <= rhs + slack,
                                  detail::fmt("failure %.6g vs exp(2m*eps)*E=%.6g", failure, rhs)});

            nlohmann::json row;
            row["d_eps"] = de;
            row["m"] = m;
            row["failure"] = failure;
            row["bound_rhs"] = rhs;
            rows.push_back(row);
        }
        ShapeFit fit = fit_log_shape(failures, shapes);
        char name[128];
        std::snprintf(name, sizeof(name), "b12-shape-fit[%s]", prior_name(kind));
        out.checks.push_back({name, fit.r_squared >= 0.9,
                              detail::fmt("R^2=%.4f (log-space fit to c*d*eps*log(1/(d*eps)))",
                                          fit.r_squared)});
        nlohmann::json sweep;
        sweep["prior"] = prior_name(kind);
        sweep["rows"] = rows;
        sweep["fit_scale"] = fit.scale;
        sweep["fit_r_squared"] = fit.r_squared;
        sweeps.push_back(sweep);
    }
    out.summary["experiment"] = out.experiment;
    out.summary["d"] = d;
    out.summary["sweeps"] = sweeps;
    return out;
}

// ---------------------------------------------------------------------------
// tree-defense: depth-threshold detection against the grafting adversary,
// with instrumentation and the leaf-overlap claim checked on every round.
// ---------------------------------------------------------------------------

struct TreeDefenseParams {
    int n = 20;
    int s = 64;
    double delta = 0.1;
    double eps = 1e-6;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
};

inline ExperimentOutput run_tree_defense(const TreeDefenseParams& p) {
    require(p.delta > 0.0 && p.delta < 1.0, "tree-defense requires 0 < delta < 1");
    if (!(p.eps < p.delta * p.delta / (static_cast<double>(p.s) * p.s)))
        throw ConfigError(detail::fmt(
            "tree-defense requires eps < delta^2/s^2: eps=%g violates the bound %g",
            p.eps, p.delta * p.delta / (static_cast<double>(p.s) * p.s)));

    ExperimentOutput out;
    out.experiment = "tree-defense";
    out.csv = std::string(detail::kCsvBase) +
              ",oracle_calls,cost_ratio,key_claim_violations,invalid_rounds\n";

    TreeGraftAttack attacker(p.n, p.s, p.eps);
    DepthDefender defender(p.s);

    GameConfig cfg;
    cfg.eps = p.eps;
    cfg.delta = p.delta;
    cfg.trials = p.trials;
    cfg.seed = detail::derive_seed(p.seed, 31);

    ConfidenceEstimate est;
    std::uint64_t key_claim_violations = 0;
    std::uint64_t invalid_rounds = 0;
    std::uint64_t size_violations = 0;
    double max_cost_ratio = 0.0;

    for (std::uint64_t trial = 0; trial < p.trials; ++trial) {
        RoundTranscript t = play_round(attacker, defender, cfg, trial);
        ++est.trials;
        est.wins += t.win ? 1 : 0;
        est.oracle_calls += t.oracle_calls;
        est.defender_tree_visits += t.defender_tree_visits;
        est.baseline_tree_visits += t.baseline_tree_visits;
        if (t.backdoor_branch) {
            ++est.backdoor_rounds;
            est.backdoor_wins += t.win ? 1 : 0;
            est.valid_backdoors += t.valid ? 1 : 0;
        } else {
            ++est.honest_rounds;
            est.honest_wins += t.win ? 1 : 0;
        }
        if (t.baseline_tree_visits > 0)
            max_cost_ratio = std::max(max_cost_ratio,
                                      static_cast<double>(t.defender_tree_visits) /
                                          static_cast<double>(t.baseline_tree_visits));

        if (!t.valid) ++invalid_rounds;
        const DecisionTree* f = t.f.decision_tree();
        const DecisionTree* fstar = t.fstar.decision_tree();
        if (fstar->size() > p.s) ++size_violations;
        if (t.valid) {
            double lower = std::ldexp(1.0, -f->depth_at(t.xstar) - fstar->depth_at(t.xstar));
            double overlap = leaf_overlap_probability(*f, *fstar, t.xstar);
            if (!(lower <= overlap && overlap <= p.eps)) ++key_claim_violations;
        }
    }
    est.point = static_cast<double>(est.wins) / static_cast<double>(est.trials);
    est.wilson = wilson95(est.wins, est.trials);

    double cost_ratio = est.baseline_tree_visits == 0
                            ? 0.0
                            : static_cast<double>(est.defender_tree_visits) /
                                  static_cast<double>(est.baseline_tree_visits);

    out.csv += detail::csv_base_row(out.experiment, attacker.name(), defender.name(), p.n, p.s,
                                    p.eps, p.delta, est) +
               "," + std::to_string(est.oracle_calls) + "," + detail::fmt(cost_ratio) + "," +
               std::to_string(key_claim_violations) + "," + std::to_string(invalid_rounds) + "\n";

    out.checks.push_back({"tree-defense-confidence",
                          est.point >= 1.0 - p.delta,
                          detail::fmt("point %.6g vs target %.6g", est.point, 1.0 - p.delta)});
    out.checks.push_back({"tree-defense-zero-oracle-calls", est.oracle_calls == 0,
                          std::to_string(est.oracle_calls) + " oracle calls"});
    out.checks.push_back({"tree-defense-cost", max_cost_ratio <= 3.0,
                          detail::fmt("max per-round cost ratio %.3f (vs 3x)", max_cost_ratio)});
    out.checks.push_back({"tree-defense-always-valid", invalid_rounds == 0,
                          std::to_string(invalid_rounds) + " invalid rounds"});
    out.checks.push_back({"tree-defense-size-bound", size_violations == 0,
                          std::to_string(size_violations) + " size violations"});
    out.checks.push_back({"key-claim-zero-violations", key_claim_violations == 0,
                          std::to_string(key_claim_violations) + " violations"});

    out.summary["experiment"] = out.experiment;
    out.summary["point"] = est.point;
    out.summary["oracle_calls"] = est.oracle_calls;
    out.summary["cost_ratio"] = cost_ratio;
    out.summary["key_claim_violations"] = key_claim_violations;
    return out;
}

// ---------------------------------------------------------------------------
// separation: keyed pseudorandom family, pairwise-distance certificate, the
// trivial defender, and fixed-hypothesis non-learnability.
// ---------------------------------------------------------------------------

struct SeparationParams {
    int n = 10;
    double eps = 0.1;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
};

inline ExperimentOutput run_separation(const SeparationParams& p) {
    require(p.n >= 2 && p.n <= 12, "separation requires 2 <= n <= 12 (exhaustive scan budget)");
    require(p.eps > 0.0 && p.eps < 0.5, "separation requires 0 < eps < 1/2");
    ExperimentOutput out;
    out.experiment = "separation";
    out.csv = std::string(detail::kCsvBase) + ",min_pairwise_distance\n";

    auto cls = std::make_shared<PrfClass>(p.n);
    PairwiseScan scan = min_pairwise_distance(*cls);

    out.checks.push_back({"separation-min-distance", scan.min_distance > p.eps,
                          detail::fmt("min pairwise distance %.6g vs eps %.6g", scan.min_distance,
                                      p.eps)});
    double hoeffding_floor =
        0.5 - 5.0 * std::sqrt(std::log(std::pow(2.0, 2.0 * p.n)) /
                              static_cast<double>(std::uint64_t(1) << (p.n + 1)));
    out.checks.push_back({"separation-concentration", scan.min_distance > hoeffding_floor,
                          detail::fmt("min distance %.6g vs tail floor %.6g", scan.min_distance,
                                      hoeffding_floor)});

    RandomClassAttack attacker(cls, p.eps);
    TrivialAcceptDefender defender;
    GameConfig cfg;
    cfg.eps = p.eps;
    cfg.delta = 0.1;
    cfg.trials = p.trials;
    cfg.seed = detail::derive_seed(p.seed, 41);
    ConfidenceEstimate est = estimate_confidence(attacker, defender, cfg);
    out.checks.push_back({"separation-trivial-defender-wins-all",
                          est.wins == est.trials && est.valid_backdoors == 0,
                          detail::fmt("win rate %.6g, valid backdoors %g", est.point,
                                      static_cast<double>(est.valid_backdoors))});

    out.csv += detail::csv_base_row(out.experiment, attacker.name(), defender.name(), p.n, 0,
                                    p.eps, cfg.delta, est) +
               "," + detail::fmt(scan.min_distance) + "\n";

    // Fixed polynomial-size hypothesis list vs random members.
    nlohmann::json hyp = nlohmann::json::array();
    std::vector<std::pair<std::string, TruthTable>> hypotheses;
    hypotheses.emplace_back("const-0", TruthTable(p.n, false));
    hypotheses.emplace_back("const-1", TruthTable(p.n, true));
    for (int v = 0; v < std::min(p.n, 3); ++v) {
        TruthTable t(p.n);
        for (std::uint32_t x = 0; x < (1u << p.n); ++x) t.set(x, (x >> v) & 1u);
        hypotheses.emplace_back("dictator-x" + std::to_string(v + 1), std::move(t));
    }
    {
        TruthTable t(p.n);
        for (std::uint32_t x = 0; x < (1u << p.n); ++x)
            t.set(x, std::popcount(x) % 2 == 1);
        hypotheses.emplace_back("parity", std::move(t));
    }

    double domain = static_cast<double>(std::uint64_t(1) << p.n);
    for (const auto& [hname, htable] : hypotheses) {
        double sum = 0.0, sumsq = 0.0;
        for (std::uint64_t k = 0; k < cls->size(); ++k) {
            double err = static_cast<double>(htable.hamming(*cls->cached_table(k))) / domain;
            sum += err;
            sumsq += err * err;
        }
        double count = static_cast<double>(cls->size());
        double mean = sum / count;
        double var = std::max(sumsq / count - mean * mean, 1e-12);
        double se_mean = std::sqrt(var / count);
        bool pass = std::abs(mean - 0.5) <= 4.0 * se_mean;
        out.checks.push_back({"separation-hypothesis-error[" + hname + "]", pass,
                              detail::fmt("mean error %.6g (4 sigma = %.2g)", mean,
                                          4.0 * se_mean)});
        nlohmann::json h;
        h["name"] = hname;
        h["mean_error"] = mean;
        hyp.push_back(h);
    }

    out.summary["experiment"] = out.experiment;
    out.summary["min_pairwise_distance"] = scan.min_distance;
    out.summary["trivial_win_rate"] = est.point;
    out.summary["hypotheses"] = hyp;
    return out;
}

// ---------------------------------------------------------------------------
// oracle-check: exact Bayes-optimal values against Monte Carlo estimates.
// ---------------------------------------------------------------------------

struct OracleCheckParams {
    int n = 3;
    std::uint64_t eps_num = 1;
    std::uint64_t eps_den = 4;
    std::uint64_t trials = 4000;
    std::uint64_t seed = 1;
};

inline ExperimentOutput run_oracle_check(const OracleCheckParams& p) {
    require(p.n >= 2 && p.n <= 4, "oracle-check requires 2 <= n <= 4 (exact enumeration budget)");
    require(p.eps_num >= 1 && p.eps_den >= 1, "oracle-check requires a positive rational eps");
    ExperimentOutput out;
    out.experiment = "oracle-check";
    out.csv = std::string(detail::kCsvBase) + ",oracle_exact\n";

    Rational eps(p.eps_num, p.eps_den);
    double eps_d = static_cast<double>(p.eps_num) / static_cast<double>(p.eps_den);

    // Removal attacker: with eps >= 2/2^n the branches are identically
    // distributed and the exact optimum is 1/2.
    {
        RemovalAttack attacker(p.n, eps_d);
        BayesOracleResult oracle = bayes_optimal_win_probability(*attacker.exact_joint(eps), eps);
        bool expect_half = eps >= Rational(2, std::uint64_t(1) << p.n);
        std::string exact_str = oracle.win_probability.str();
        out.checks.push_back(
            {"oracle-removal-exact",
             !expect_half || oracle.win_probability == Rational(1, 2),
             "exact win probability = " + exact_str});

        GameConfig cfg;
        cfg.eps = eps_d;
        cfg.delta = 0.5;
        cfg.trials = p.trials;
        cfg.seed = detail::derive_seed(p.seed, 51);
        cfg.mode = GameMode::RuleViolation;
        TrivialAcceptDefender trivial;
        RandomGuessDefender guess;
        ConfidenceEstimate e1 = estimate_confidence(attacker, trivial, cfg);
        cfg.seed = detail::derive_seed(p.seed, 52);
        ConfidenceEstimate e2 = estimate_confidence(attacker, guess, cfg);
        double ceiling = static_cast<double>(oracle.win_probability);
        out.checks.push_back({"oracle-removal-mc-below-oracle",
                              e1.wilson.lo <= ceiling && e2.wilson.lo <= ceiling,
                              detail::fmt("MC points %.4g / %.4g vs exact %.4g", e1.point, e2.point,
                                          ceiling)});
        out.csv += detail::csv_base_row(out.experiment, attacker.name(), trivial.name(), p.n, 1,
                                        eps_d, 0.5, e1) +
                   "," + exact_str + "\n";
        out.summary["removal_exact"] = exact_str;
    }

    // Shattered attacker at d=3: exact value, frozen and bounded by the
    // theorem ceiling.
    {
        auto cls = all_functions_on(p.n, first_points(p.n, 3));
        ShatterResult sh = is_shattered(*cls, first_points(p.n, 3));
        ShatteredSetAttack attacker(cls, eps_d, *sh.witness);
        BayesOracleResult oracle = bayes_optimal_win_probability(*attacker.exact_joint(eps), eps);
        Rational ceiling = 1 - eps * (3 - 1) / 2;
        std::string exact_str = oracle.win_probability.str();
        out.checks.push_back({"oracle-shattered-ceiling", oracle.win_probability <= ceiling,
                              "exact " + exact_str + " vs ceiling " + ceiling.str()});
        out.summary["shattered_exact"] = exact_str;

        GameConfig cfg;
        cfg.eps = eps_d;
        cfg.delta = 0.5;
        cfg.trials = p.trials;
        cfg.seed = detail::derive_seed(p.seed, 53);
        BoltzmannDefender defender(build_uniform_prior(*cls), PriorKind::Uniform);
        ConfidenceEstimate est = estimate_confidence(attacker, defender, cfg);
        out.checks.push_back({"oracle-shattered-mc-below-oracle",
                              est.wilson.lo <= static_cast<double>(oracle.win_probability),
                              detail::fmt("MC %.4g vs exact %.4g", est.point,
                                          static_cast<double>(oracle.win_probability))});
        out.csv += detail::csv_base_row(out.experiment, attacker.name(), defender.name(), p.n, 3,
                                        eps_d, 0.5, est) +
                   "," + exact_str + "\n";
    }

    // An attacker that never produces a valid backdoor auto-loses the
    // backdoor branch; the exact optimum is 1.
    {
        std::vector<TruthTable> tables{TruthTable(p.n, false), TruthTable(p.n, true)};
        auto cls = std::make_shared<ExplicitClass>("constants", std::move(tables));
        FlipPointAttack attacker(cls, InputDistribution::uniform(p.n), eps_d,
                                 std::vector<Rational>(size_t(1) << p.n,
                                                       Rational(1, std::uint64_t(1) << p.n)));
        BayesOracleResult oracle = bayes_optimal_win_probability(*attacker.exact_joint(eps), eps);
        out.checks.push_back({"oracle-never-valid-exact", oracle.win_probability == 1,
                              "exact win probability = " + oracle.win_probability.str()});
        out.summary["never_valid_exact"] = oracle.win_probability.str();
    }

    out.summary["experiment"] = out.experiment;
    out.summary["eps"] = eps.str();
    return out;
}

// ---------------------------------------------------------------------------
// Config-file entry point shared by the CLI and tests.
// ---------------------------------------------------------------------------

inline ExperimentOutput run_from_config(const nlohmann::json& cfg) {
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    if (!cfg.contains("version") || !cfg["version"].is_number_integer() || cfg["version"] != 1)
        throw ConfigError("config requires \"version\": 1");
    if (!cfg.contains("experiment") || !cfg["experiment"].is_string())
        throw ConfigError("config requires an \"experiment\" name");
    std::string experiment = cfg["experiment"];

    auto get_u64 = [&](const char* key, std::uint64_t dflt) -> std::uint64_t {
        if (!cfg.contains(key)) return dflt;
        if (!cfg[key].is_number_unsigned() && !cfg[key].is_number_integer())
            throw ConfigError(std::string("config field \"") + key + "\" must be an integer");
        return cfg[key].get<std::uint64_t>();
    };
    auto get_int = [&](const char* key, int dflt) -> int {
        return static_cast<int>(get_u64(key, static_cast<std::uint64_t>(dflt)));
    };
    auto get_double = [&](const char* key, double dflt) -> double {
        if (!cfg.contains(key)) return dflt;
        if (!cfg[key].is_number())
            throw ConfigError(std::string("config field \"") + key + "\" must be a number");
        return cfg[key].get<double>();
    };

    if (experiment == "theorem1-sweep") {
        Theorem1Params p;
        p.n = get_int("n", p.n);
        p.trials = get_u64("trials", p.trials);
        p.seed = get_u64("seed", p.seed);
        if (cfg.contains("d_list")) p.d_list = cfg["d_list"].get<std::vector<int>>();
        if (cfg.contains("eps_list")) p.eps_list = cfg["eps_list"].get<std::vector<double>>();
        return run_theorem1_sweep(p);
    }
    if (experiment == "boltzmann-sweep") {
        BoltzmannSweepParams p;
        p.n = get_int("n", p.n);
        p.support = get_int("support", p.support);
        p.trials = get_u64("trials", p.trials);
        p.canonical_draws = get_u64("canonical_draws", p.canonical_draws);
        p.seed = get_u64("seed", p.seed);
        if (cfg.contains("d_eps")) p.d_eps = cfg["d_eps"].get<std::vector<double>>();
        if (cfg.contains("priors")) {
            p.priors.clear();
            for (const auto& s : cfg["priors"]) {
                std::string v = s.get<std::string>();
                if (v == "uniform")
                    p.priors.push_back(PriorKind::Uniform);
                else if (v == "max-entropy")
                    p.priors.push_back(PriorKind::MaxEntropy);
                else if (v == "canonical")
                    p.priors.push_back(PriorKind::Canonical);
                else
                    throw ConfigError("unknown prior kind: " + v);
            }
        }
        return run_boltzmann_sweep(p);
    }
    if (experiment == "tree-defense") {
        TreeDefenseParams p;
        p.n = get_int("n", p.n);
        p.s = get_int("s", p.s);
        p.delta = get_double("delta", p.delta);
        p.eps = get_double("eps", p.eps);
        p.trials = get_u64("trials", p.trials);
        p.seed = get_u64("seed", p.seed);
        return run_tree_defense(p);
    }
    if (experiment == "separation") {
        SeparationParams p;
        p.n = get_int("n", p.n);
        p.eps = get_double("eps", p.eps);
        p.trials = get_u64("trials", p.trials);
        p.seed = get_u64("seed", p.seed);
        return run_separation(p);
    }
    if (experiment == "oracle-check") {
        OracleCheckParams p;
        p.n = get_int("n", p.n);
        p.eps_num = get_u64("eps_num", p.eps_num);
        p.eps_den = get_u64("eps_den", p.eps_den);
        p.trials = get_u64("trials", p.trials);
        p.seed = get_u64("seed", p.seed);
        return run_oracle_check(p);
    }
    throw ConfigError("unknown experiment: " + experiment);
}

}  // namespace bdgame
