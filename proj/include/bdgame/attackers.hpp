#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/decision_tree.hpp"
#include "bdgame/exact_oracle.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/ggm_prf.hpp"
#include "bdgame/representation.hpp"
#include "bdgame/vc.hpp"

namespace bdgame {

struct BackdoorProposal {
    Representation fstar;
    bool claimed_valid = false;
};

// An attack strategy fixes D up front, picks the original function, and
// turns a sampled trigger into a backdoored function. Attackers that exploit
// the forbidden ordering (function chosen after the trigger) override the
// after-trigger hook instead and are only runnable in that engine mode.
class Attacker {
public:
    virtual ~Attacker() = default;

    virtual std::string name() const = 0;
    virtual int dimension() const = 0;
    virtual const InputDistribution& input_distribution() const = 0;
    virtual std::shared_ptr<const FunctionClass> function_class() const { return nullptr; }

    virtual bool trigger_before_function() const { return false; }

    virtual Representation choose_original(RandomSource& rng) const = 0;
    virtual BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                            RandomSource& rng) const = 0;

    virtual std::pair<Representation, BackdoorProposal> choose_pair_after_trigger(
        const InputPoint&, RandomSource&) const {
        throw ContractError(name() + ": standard trigger order only");
    }

    // Exact joint of (f, x*, f*) for the Bayes-optimal oracle, when the
    // attacker is enumerable at this scale.
    virtual std::optional<ExactJoint> exact_joint(const Rational&) const { return std::nullopt; }
};

// Concentrates D on a shattered set S: every point of S except an anchor s
// gets mass min(1/(d-1), eps), the rest sits on s. The original function is
// a uniformly random shattering witness with f(s) = 0; the backdoor flips
// the witness labeling exactly at the trigger. Triggers landing on s admit
// no valid backdoor, which is what caps every defender's win probability.
class ShatteredSetAttack : public Attacker {
public:
    ShatteredSetAttack(std::shared_ptr<const FunctionClass> cls, double eps, ShatterWitness witness)
        : cls_(std::move(cls)), eps_(eps), witness_(std::move(witness)) {
        require(eps > 0.0, "shattered attack: eps must be positive");
        d_ = static_cast<int>(witness_.points.size());
        if (d_ < 2) throw AttackUnavailableError("shattered attack: needs VC dimension >= 2");
        int n = cls_->dimension();
        double unit = std::min(1.0 / (d_ - 1), eps_);
        std::vector<double> masses(size_t(1) << n, 0.0);
        for (int i = 1; i < d_; ++i) masses[witness_.points[static_cast<size_t>(i)].bits] = unit;
        masses[witness_.points[0].bits] = 1.0 - unit * (d_ - 1);
        dist_ = InputDistribution(n, std::move(masses));
    }

    // Discovers a maximum shattered set by brute force.
    static ShatteredSetAttack discover(std::shared_ptr<const FunctionClass> cls, double eps) {
        int d = vc_dimension(*cls);
        if (d < 2) throw AttackUnavailableError("shattered attack: needs VC dimension >= 2");
        std::vector<InputPoint> candidates = detail::distinct_columns(*cls);
        ShatterResult found;
        detail::for_each_subset(candidates.size(), static_cast<size_t>(d),
                                [&](const std::vector<size_t>& idx) {
                                    std::vector<InputPoint> pts;
                                    for (size_t i : idx) pts.push_back(candidates[i]);
                                    ShatterResult r = is_shattered(*cls, pts);
                                    if (r.shattered) found = std::move(r);
                                    return found.shattered;
                                });
        require(found.shattered, "shattered attack: no shattered set of full VC size found");
        return ShatteredSetAttack(std::move(cls), eps, std::move(*found.witness));
    }

    std::string name() const override { return "shattered-set"; }
    int dimension() const override { return cls_->dimension(); }
    const InputDistribution& input_distribution() const override { return dist_; }
    std::shared_ptr<const FunctionClass> function_class() const override { return cls_; }
    int shattered_size() const { return d_; }
    const ShatterWitness& witness() const { return witness_; }

    Representation choose_original(RandomSource& rng) const override {
        std::uint32_t labeling =
            static_cast<std::uint32_t>(rng.next_below(std::uint64_t(1) << (d_ - 1))) << 1;
        return Representation::of_member(cls_, witness_.member_for(labeling));
    }

    BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                    RandomSource&) const override {
        int coord = -1;
        for (int i = 1; i < d_; ++i)
            if (witness_.points[static_cast<size_t>(i)] == xstar) coord = i;
        if (coord < 0) return BackdoorProposal{f, false};  // trigger on the anchor
        std::uint32_t labeling = f.cls->labeling_over(f.index, witness_.points);
        labeling ^= 1u << coord;
        return BackdoorProposal{Representation::of_member(cls_, witness_.member_for(labeling)),
                                true};
    }

    std::optional<ExactJoint> exact_joint(const Rational& eps) const override {
        int n = cls_->dimension();
        if (n > 4 || cls_->size() > 4096) return std::nullopt;
        Rational unit = std::min(Rational(1, std::uint64_t(d_ - 1)), eps);
        ExactJoint joint;
        joint.n = n;
        joint.distribution.assign(size_t(1) << n, Rational(0));
        for (int i = 1; i < d_; ++i)
            joint.distribution[witness_.points[static_cast<size_t>(i)].bits] = unit;
        joint.distribution[witness_.points[0].bits] = 1 - unit * (d_ - 1);

        Rational per_f(1, std::uint64_t(1) << (d_ - 1));
        for (std::uint32_t lab = 0; lab < (1u << d_); lab += 2) {
            std::uint64_t f_idx = witness_.member_for(lab);
            TruthTable f_table = cls_->table_of(f_idx);
            for (int i = 0; i < d_; ++i) {
                std::uint32_t x = witness_.points[static_cast<size_t>(i)].bits;
                if (joint.distribution[x] == 0) continue;
                ExactAtom atom;
                atom.prob = per_f * joint.distribution[x];
                atom.f = f_table;
                atom.xstar = x;
                atom.fstar =
                    i == 0 ? f_table : cls_->table_of(witness_.member_for(lab ^ (1u << i)));
                joint.atoms.push_back(std::move(atom));
            }
        }
        return joint;
    }

private:
    std::shared_ptr<const FunctionClass> cls_;
    double eps_;
    ShatterWitness witness_;
    InputDistribution dist_;
    int d_ = 0;
};

// Flips the original function exactly at the trigger whenever the flipped
// table is itself a class member within budget eps; otherwise concedes the
// round. The backbone of the average-case experiments.
class FlipPointAttack : public Attacker {
public:
    FlipPointAttack(std::shared_ptr<const FunctionClass> cls, InputDistribution dist, double eps,
                    std::vector<Rational> exact_masses = {})
        : cls_(std::move(cls)), dist_(std::move(dist)), eps_(eps),
          exact_masses_(std::move(exact_masses)) {
        require(eps > 0.0, "flip attack: eps must be positive");
        require_budget(cls_->size() <= (std::uint64_t(1) << 16), "flip attack: class too large");
        for (std::uint64_t i = 0; i < cls_->size(); ++i)
            by_table_.emplace(cls_->table_of(i).words(), i);
    }

    std::string name() const override { return "flip-point"; }
    int dimension() const override { return cls_->dimension(); }
    const InputDistribution& input_distribution() const override { return dist_; }
    std::shared_ptr<const FunctionClass> function_class() const override { return cls_; }

    Representation choose_original(RandomSource& rng) const override {
        return Representation::of_member(cls_, rng.next_below(cls_->size()));
    }

    BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                    RandomSource&) const override {
        TruthTable t = f.cls->table_of(f.index);
        t.flip(xstar.bits);
        auto it = by_table_.find(t.words());
        if (it == by_table_.end()) return BackdoorProposal{f, false};
        if (cls_->member_distance(f.index, it->second, dist_) > eps_)
            return BackdoorProposal{f, false};
        return BackdoorProposal{Representation::of_member(cls_, it->second), true};
    }

    std::optional<ExactJoint> exact_joint(const Rational& eps) const override {
        if (exact_masses_.empty() || cls_->dimension() > 4 || cls_->size() > 4096)
            return std::nullopt;
        ExactJoint joint;
        joint.n = cls_->dimension();
        joint.distribution = exact_masses_;
        Rational per_f(1, cls_->size());
        for (std::uint64_t i = 0; i < cls_->size(); ++i) {
            TruthTable f_table = cls_->table_of(i);
            for (std::uint32_t x = 0; x < joint.distribution.size(); ++x) {
                if (joint.distribution[x] == 0) continue;
                ExactAtom atom;
                atom.prob = per_f * joint.distribution[x];
                atom.f = f_table;
                atom.xstar = x;
                TruthTable flipped = f_table;
                flipped.flip(x);
                auto it = by_table_.find(flipped.words());
                if (it != by_table_.end() &&
                    exact_distance(f_table, flipped, joint.distribution) <= eps)
                    atom.fstar = flipped;
                else
                    atom.fstar = f_table;
                joint.atoms.push_back(std::move(atom));
            }
        }
        return joint;
    }

private:
    std::shared_ptr<const FunctionClass> cls_;
    InputDistribution dist_;
    double eps_;
    std::vector<Rational> exact_masses_;
    std::map<std::vector<std::uint64_t>, std::uint64_t> by_table_;
};

// The forbidden-ordering demonstration on the indicator family: the
// "original" indicator sits on the trigger itself and the "backdoored" one
// on a fresh point, making the two branches identically distributed.
class RemovalAttack : public Attacker {
public:
    RemovalAttack(int n, double eps)
        : n_(n), eps_(eps), cls_(std::make_shared<IndicatorClass>(n)),
          dist_(InputDistribution::uniform(n)) {
        require(eps > 0.0, "removal attack: eps must be positive");
    }

    std::string name() const override { return "backdoor-removal"; }
    int dimension() const override { return n_; }
    const InputDistribution& input_distribution() const override { return dist_; }
    std::shared_ptr<const FunctionClass> function_class() const override { return cls_; }
    bool trigger_before_function() const override { return true; }

    Representation choose_original(RandomSource&) const override {
        throw ContractError(
            "backdoor-removal: refuses the standard order; the whole point is choosing f after "
            "the trigger");
    }

    BackdoorProposal plant_backdoor(const Representation&, const InputPoint&,
                                    RandomSource&) const override {
        throw ContractError("backdoor-removal: runs only in trigger-first mode");
    }

    std::pair<Representation, BackdoorProposal> choose_pair_after_trigger(
        const InputPoint& xstar, RandomSource& rng) const override {
        double two_points = 2.0 / static_cast<double>(std::uint64_t(1) << n_);
        InputPoint xprime = dist_.sample(rng);
        if (xprime.bits != xstar.bits) {
            Representation f = Representation::of_member(cls_, xstar.bits);
            Representation fstar = Representation::of_member(cls_, xprime.bits);
            return {f, BackdoorProposal{fstar, two_points <= eps_}};
        }
        // Fresh point collided with the trigger: re-home the original instead.
        std::uint64_t other = rng.next_below((std::uint64_t(1) << n_) - 1);
        if (other >= xstar.bits) ++other;
        Representation f = Representation::of_member(cls_, other);
        Representation fstar = Representation::of_member(cls_, xstar.bits);
        return {f, BackdoorProposal{fstar, two_points <= eps_}};
    }

    std::optional<ExactJoint> exact_joint(const Rational&) const override {
        if (n_ > 4) return std::nullopt;
        std::uint64_t domain = std::uint64_t(1) << n_;
        ExactJoint joint;
        joint.n = n_;
        joint.distribution.assign(domain, Rational(1, domain));
        Rational base(1, domain * domain);
        for (std::uint32_t xstar = 0; xstar < domain; ++xstar) {
            for (std::uint32_t xprime = 0; xprime < domain; ++xprime) {
                if (xprime != xstar) {
                    ExactAtom atom;
                    atom.prob = base;
                    atom.f = cls_->table_of(xstar);
                    atom.xstar = xstar;
                    atom.fstar = cls_->table_of(xprime);
                    joint.atoms.push_back(std::move(atom));
                } else {
                    for (std::uint32_t other = 0; other < domain; ++other) {
                        if (other == xstar) continue;
                        ExactAtom atom;
                        atom.prob = base / (domain - 1);
                        atom.f = cls_->table_of(other);
                        atom.xstar = xstar;
                        atom.fstar = cls_->table_of(xstar);
                        joint.atoms.push_back(std::move(atom));
                    }
                }
            }
        }
        return joint;
    }

private:
    int n_;
    double eps_;
    std::shared_ptr<IndicatorClass> cls_;
    InputDistribution dist_;
};

// Special-cased family over a base class: the honest function is a vacuous
// triple (its override matches the base), the backdoor overrides the trigger.
class SpecialCaseAttack : public Attacker {
public:
    SpecialCaseAttack(std::shared_ptr<const FunctionClass> base, double eps)
        : cls_(std::make_shared<SpecialCasedClass>(std::move(base))), eps_(eps),
          dist_(InputDistribution::uniform(cls_->dimension())) {
        require(eps > 0.0, "special-case attack: eps must be positive");
    }

    std::string name() const override { return "special-case"; }
    int dimension() const override { return cls_->dimension(); }
    const InputDistribution& input_distribution() const override { return dist_; }
    std::shared_ptr<const FunctionClass> function_class() const override { return cls_; }
    std::shared_ptr<const SpecialCasedClass> special_class() const { return cls_; }

    Representation choose_original(RandomSource& rng) const override {
        std::uint64_t base_idx = rng.next_below(cls_->base().size());
        InputPoint p(static_cast<std::uint32_t>(rng.next_below(std::uint64_t(1) << dimension())),
                     dimension());
        bool y = cls_->base().evaluate(base_idx, p);  // vacuous special case
        return Representation::of_member(cls_, cls_->encode(base_idx, p, y));
    }

    BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                    RandomSource&) const override {
        SpecialCasedClass::Triple t = cls_->decode(f.index);
        bool current = cls_->evaluate(f.index, xstar);
        std::uint64_t idx = cls_->encode(t.base_index, xstar, !current);
        double point_mass = 1.0 / static_cast<double>(std::uint64_t(1) << dimension());
        return BackdoorProposal{Representation::of_member(cls_, idx), point_mass <= eps_};
    }

private:
    std::shared_ptr<SpecialCasedClass> cls_;
    double eps_;
    InputDistribution dist_;
};

// Adversary for the tree game: a random tree of size <= s/2, backdoored by
// regrafting the trigger's leaf behind a chain of fresh variable tests deep
// enough that the flipped leaf's mass drops below eps.
class TreeGraftAttack : public Attacker {
public:
    TreeGraftAttack(int n, int size_bound, double eps)
        : n_(n), s_(size_bound), eps_(eps), dist_(InputDistribution::uniform(n)) {
        require(eps > 0.0, "tree-graft attack: eps must be positive");
        require(size_bound >= 2, "tree-graft attack: size bound too small");
        target_depth_ = 0;
        while (std::ldexp(1.0, -target_depth_) > eps_) {
            ++target_depth_;
            if (target_depth_ > n_)
                throw AttackUnavailableError(
                    "tree-graft attack: 2^-n exceeds eps, no deep enough leaf exists");
        }
        if (s_ / 2 + target_depth_ > s_)
            throw AttackUnavailableError("tree-graft attack: graft would exceed the size bound");
    }

    std::string name() const override { return "tree-graft"; }
    int dimension() const override { return n_; }
    const InputDistribution& input_distribution() const override { return dist_; }
    int target_depth() const { return target_depth_; }
    int size_bound() const { return s_; }

    Representation choose_original(RandomSource& rng) const override {
        return Representation::of_tree(DecisionTree::random(n_, s_ / 2, rng));
    }

    BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                    RandomSource&) const override {
        const DecisionTree* tree = f.decision_tree();
        require(tree != nullptr, "tree-graft attack: original is not a tree");
        return BackdoorProposal{
            Representation::of_tree(tree->graft_deep_flip(xstar, target_depth_)), true};
    }

private:
    int n_;
    int s_;
    double eps_;
    int target_depth_;
    InputDistribution dist_;
};

// Uniform D over keyed pseudorandom functions: the best available backdoor is
// the nearest other key, which at these parameters is never within eps.
class RandomClassAttack : public Attacker {
public:
    RandomClassAttack(std::shared_ptr<const PrfClass> cls, double eps)
        : cls_(std::move(cls)), eps_(eps), dist_(InputDistribution::uniform(cls_->dimension())) {
        require(eps > 0.0, "random-class attack: eps must be positive");
        // Best-effort nearest neighbour per key, by exhaustive scan.
        std::uint64_t size = cls_->size();
        nearest_.assign(size, 0);
        std::vector<std::uint64_t> best(size, ~0ull);
        for (std::uint64_t i = 0; i < size; ++i) {
            const TruthTable* ti = cls_->cached_table(i);
            require(ti != nullptr, "random-class attack: class must be materialized");
            for (std::uint64_t j = i + 1; j < size; ++j) {
                std::uint64_t h = ti->hamming(*cls_->cached_table(j));
                if (h < best[i]) {
                    best[i] = h;
                    nearest_[i] = j;
                }
                if (h < best[j]) {
                    best[j] = h;
                    nearest_[j] = i;
                }
            }
        }
    }

    std::string name() const override { return "random-class"; }
    int dimension() const override { return cls_->dimension(); }
    const InputDistribution& input_distribution() const override { return dist_; }
    std::shared_ptr<const FunctionClass> function_class() const override { return cls_; }

    Representation choose_original(RandomSource& rng) const override {
        return Representation::of_member(cls_, rng.next_below(cls_->size()));
    }

    BackdoorProposal plant_backdoor(const Representation& f, const InputPoint& xstar,
                                    RandomSource&) const override {
        std::uint64_t candidate = nearest_[f.index];
        bool valid = cls_->evaluate(candidate, xstar) != cls_->evaluate(f.index, xstar) &&
                     cls_->member_distance(f.index, candidate, dist_) <= eps_;
        return BackdoorProposal{Representation::of_member(cls_, candidate), valid};
    }

private:
    std::shared_ptr<const PrfClass> cls_;
    double eps_;
    InputDistribution dist_;
    std::vector<std::uint64_t> nearest_;
};

}  // namespace bdgame
