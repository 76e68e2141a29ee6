#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "bdgame/boltzmann.hpp"
#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/predictors.hpp"
#include "bdgame/priors.hpp"
#include "bdgame/representation.hpp"

namespace bdgame {

enum class Verdict { Acc, Rej };

inline const char* verdict_name(Verdict v) { return v == Verdict::Acc ? "Acc" : "Rej"; }

struct VoteParams {
    int m = 1;  // prediction sample size parameter (each vote sees m-1 examples)
    int r = 1;  // number of votes, odd
};

// m is the unique integer in (1/(5 eps), 1/(5 eps) + 1]; r is the smallest
// odd integer >= the smallest integer > 200 ln(1/delta). Natural log: the
// vote failure bound decays as exp(-r/200).
inline VoteParams choose_vote_params(double eps, double delta) {
    require(eps > 0.0, "choose_vote_params: eps must be positive");
    require(delta > 0.0 && delta < 1.0, "choose_vote_params: delta must be in (0,1)");
    VoteParams p;
    double lo = 1.0 / (5.0 * eps);
    p.m = static_cast<int>(std::floor(lo)) + 1;
    int s = static_cast<int>(std::floor(200.0 * std::log(1.0 / delta))) + 1;
    if (s < 1) s = 1;
    p.r = (s % 2 == 1) ? s : s + 1;
    return p;
}

// Counts draws from Ex(f', D); labels always come from the presented f'.
class ExampleOracle {
public:
    ExampleOracle(const Representation& f, const InputDistribution& D, RandomSource& rng)
        : f_(&f), d_(&D), rng_(&rng) {}

    LabeledExample draw() {
        ++calls_;
        InputPoint x = d_->sample(*rng_);
        return LabeledExample{x, f_->evaluate(x)};
    }

    std::uint64_t calls() const { return calls_; }

private:
    const Representation* f_;
    const InputDistribution* d_;
    RandomSource* rng_;
    std::uint64_t calls_ = 0;
};

// Exactly what one round hands the detection strategy: the representation,
// the queried point and its label, the game parameters, oracle access, the
// class description, and (where a strategy is declared to know it) D itself.
struct DetectionInput {
    const Representation& fprime;
    InputPoint xprime;
    bool label = false;
    double eps = 0.0;
    double delta = 0.0;
    ExampleOracle& oracle;
    std::shared_ptr<const FunctionClass> cls;
    const InputDistribution* known_distribution = nullptr;
    RandomSource& rng;
    std::uint64_t* defender_tree_visits = nullptr;  // instrumentation
};

class Defender {
public:
    virtual ~Defender() = default;
    virtual std::string name() const = 0;
    virtual Verdict detect(const DetectionInput& in) const = 0;
};

class TrivialAcceptDefender : public Defender {
public:
    std::string name() const override { return "trivial-accept"; }
    Verdict detect(const DetectionInput&) const override { return Verdict::Acc; }
};

class RandomGuessDefender : public Defender {
public:
    std::string name() const override { return "random-guess"; }
    Verdict detect(const DetectionInput& in) const override {
        return in.rng.next_bit() ? Verdict::Rej : Verdict::Acc;
    }
};

// Rej iff strictly more than half the votes disagree with the given label.
inline Verdict majority_verdict(int disagreeing_votes, int total_votes) {
    return 2 * disagreeing_votes > total_votes ? Verdict::Rej : Verdict::Acc;
}

// Prediction-plus-voting detection: r independent predictions of f'(x') from
// fresh (m-1)-example samples, rejecting when the majority disagrees with
// the label in hand.
class MajorityVoteDefender : public Defender {
public:
    explicit MajorityVoteDefender(PredictorKind kind) : kind_(kind) {}

    std::string name() const override {
        return std::string("majority-vote[") + predictor_name(kind_) + "]";
    }

    Verdict detect(const DetectionInput& in) const override {
        require(in.cls != nullptr, "majority-vote: needs the class description");
        VoteParams params = choose_vote_params(in.eps, in.delta);
        int disagree = 0;
        for (int v = 0; v < params.r; ++v) {
            Sample sample;
            sample.reserve(static_cast<size_t>(params.m) - 1);
            for (int i = 0; i + 1 < params.m; ++i) sample.push_back(in.oracle.draw());
            bool z = predict(kind_, *in.cls, sample, in.xprime, in.rng);
            if (z != in.label) ++disagree;
        }
        return majority_verdict(disagree, params.r);
    }

    PredictorKind predictor_kind() const { return kind_; }

private:
    PredictorKind kind_;
};

// Draw one hypothesis from the posterior centered on f'; accept when it
// agrees with the label at x'. This strategy is granted exact knowledge of D.
inline Verdict boltzmann_defend(const BoltzmannPosterior& posterior, const FunctionClass& cls,
                                const InputPoint& xprime, bool label, RandomSource& rng) {
    std::uint64_t h = posterior.sample(rng);
    return cls.evaluate(h, xprime) == label ? Verdict::Acc : Verdict::Rej;
}

class BoltzmannDefender : public Defender {
public:
    BoltzmannDefender(Prior prior, PriorKind kind_label)
        : prior_(std::move(prior)), kind_label_(kind_label) {
        prior_.validate();
    }

    std::string name() const override {
        return std::string("boltzmann[") + prior_name(kind_label_) + "]";
    }

    // Inverse temperature m = round(1/eps), the choice the posterior bounds
    // are stated for.
    static int temperature_for(double eps) {
        return std::max(1, static_cast<int>(std::llround(1.0 / eps)));
    }

    Verdict detect(const DetectionInput& in) const override {
        require(in.cls != nullptr, "boltzmann: needs the class description");
        require(in.known_distribution != nullptr, "boltzmann: needs exact knowledge of D");
        int m = temperature_for(in.eps);
        BoltzmannPosterior post =
            boltzmann_posterior(prior_, m, *in.cls, in.fprime.table(), *in.known_distribution);
        return boltzmann_defend(post, *in.cls, in.xprime, in.label, in.rng);
    }

    const Prior& prior() const { return prior_; }

private:
    Prior prior_;
    PriorKind kind_label_;
};

// Mechanistic tree detection: reject when the reached leaf is suspiciously
// deep. Never touches the example oracle; cost is one path walk.
class DepthDefender : public Defender {
public:
    explicit DepthDefender(int size_bound) : s_(size_bound) {
        require(size_bound >= 1, "DepthDefender: bad size bound");
    }

    std::string name() const override { return "depth-threshold"; }

    Verdict detect(const DetectionInput& in) const override {
        const DecisionTree* tree = in.fprime.decision_tree();
        require(tree != nullptr, "depth-threshold: representation is not a decision tree");
        require(in.delta > 0.0 && in.delta < 1.0, "depth-threshold: delta must be in (0,1)");
        int depth = tree->depth_at(in.xprime, in.defender_tree_visits);
        return std::ldexp(1.0, -depth) <= in.delta / static_cast<double>(s_) ? Verdict::Rej
                                                                             : Verdict::Acc;
    }

    int size_bound() const { return s_; }

private:
    int s_;
};

// Reject iff the queried input equals the representation's special-cased
// point.
class SpecialPointCheckDefender : public Defender {
public:
    std::string name() const override { return "special-point-check"; }

    Verdict detect(const DetectionInput& in) const override {
        const auto* sc = dynamic_cast<const SpecialCasedClass*>(in.fprime.cls.get());
        require(sc != nullptr, "special-point-check: representation is not special-cased");
        SpecialCasedClass::Triple t = sc->decode(in.fprime.index);
        return in.xprime == t.point ? Verdict::Rej : Verdict::Acc;
    }
};

}  // namespace bdgame
