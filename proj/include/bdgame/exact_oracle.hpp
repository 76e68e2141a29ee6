#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"

namespace bdgame {

using Rational = boost::multiprecision::cpp_rational;

// One outcome of an attacker's randomness: the original function, the
// trigger, and the backdoored function, with its exact probability.
struct ExactAtom {
    Rational prob;
    TruthTable f;
    std::uint32_t xstar = 0;
    TruthTable fstar;
};

// Full exact description of an attacker at enumeration scale: D as rational
// masses over {0,1}^n plus the joint distribution of (f, x*, f*).
struct ExactJoint {
    int n = 0;
    std::vector<Rational> distribution;
    std::vector<ExactAtom> atoms;

    void validate() const {
        Rational total = 0;
        for (const Rational& p : distribution) {
            require(p >= 0, "ExactJoint: negative mass");
            total += p;
        }
        require(total == 1, "ExactJoint: distribution must sum to 1");
        total = 0;
        for (const ExactAtom& a : atoms) total += a.prob;
        require(total == 1, "ExactJoint: atom probabilities must sum to 1");
    }
};

inline Rational exact_distance(const TruthTable& f, const TruthTable& g,
                               const std::vector<Rational>& masses) {
    Rational d = 0;
    for (std::uint32_t x = 0; x < masses.size(); ++x)
        if (masses[x] != 0 && f.get(x) != g.get(x)) d += masses[x];
    return d;
}

inline bool exact_valid(const ExactAtom& atom, const std::vector<Rational>& masses,
                        const Rational& eps) {
    if (atom.f.get(atom.xstar) == atom.fstar.get(atom.xstar)) return false;
    return exact_distance(atom.f, atom.fstar, masses) <= eps;
}

// Joint distributions over (presented function, presented point) for the two
// branches. The honest branch pairs f with a fresh x ~ D; the backdoor
// branch contributes only its valid atoms.
struct BranchJoints {
    using Key = std::pair<std::vector<std::uint64_t>, std::uint32_t>;
    std::map<Key, Rational> honest;
    std::map<Key, Rational> valid;
    Rational p_valid = 0;
};

inline BranchJoints exact_branch_joints(const ExactJoint& joint, const Rational& eps) {
    BranchJoints out;
    for (const ExactAtom& atom : joint.atoms) {
        for (std::uint32_t x = 0; x < joint.distribution.size(); ++x)
            if (joint.distribution[x] != 0)
                out.honest[{atom.f.words(), x}] += atom.prob * joint.distribution[x];
        if (exact_valid(atom, joint.distribution, eps)) {
            out.valid[{atom.fstar.words(), atom.xstar}] += atom.prob;
            out.p_valid += atom.prob;
        }
    }
    return out;
}

struct BayesOracleResult {
    Rational win_probability;
    Rational p_valid;
    Rational l1;  // total variation times two, between the branch joints
};

// The exact ceiling for any detection strategy against this attacker: the
// optimal verdict per presented pair plus the automatic wins from invalid
// backdoors. With L1 the 1-norm between the honest joint (mass 1) and the
// valid-backdoor joint (mass p_valid),
//   win* = 3/4 - p_valid/4 + L1/4,
// which reduces to 1/2 + TV/2 when every backdoor is valid and to 1 when
// none is.
inline BayesOracleResult bayes_optimal_win_probability(const ExactJoint& joint,
                                                       const Rational& eps) {
    joint.validate();
    BranchJoints b = exact_branch_joints(joint, eps);
    Rational l1 = 0;
    for (const auto& [key, h] : b.honest) {
        auto it = b.valid.find(key);
        Rational v = it == b.valid.end() ? Rational(0) : it->second;
        l1 += h >= v ? h - v : v - h;
    }
    for (const auto& [key, v] : b.valid)
        if (b.honest.find(key) == b.honest.end()) l1 += v;

    BayesOracleResult res;
    res.p_valid = b.p_valid;
    res.l1 = l1;
    res.win_probability = Rational(3, 4) - b.p_valid / 4 + l1 / 4;
    return res;
}

}  // namespace bdgame
