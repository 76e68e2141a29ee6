#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/random.hpp"

namespace bdgame {

// A point of {0,1}^n. Bit i of `bits` is the value of variable x_{i+1}, so
// the string "0110" means x1=0, x2=1, x3=1, x4=0 and has index 6.
struct InputPoint {
    std::uint32_t bits = 0;
    int n = 0;

    InputPoint() = default;
    InputPoint(std::uint32_t b, int dim) : bits(b), n(dim) {
        require(dim >= 0 && dim <= kMaxDimension, "InputPoint: dimension out of range");
        require(dim == 32 || (b >> dim) == 0, "InputPoint: bits exceed dimension");
    }

    bool bit(int i) const { return (bits >> i) & 1u; }

    std::string to_string() const {
        std::string s(static_cast<size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if (bit(i)) s[static_cast<size_t>(i)] = '1';
        return s;
    }

    static InputPoint parse(const std::string& s) {
        require(s.size() <= kMaxDimension, "InputPoint::parse: too long");
        std::uint32_t b = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            require(s[i] == '0' || s[i] == '1', "InputPoint::parse: bad character");
            if (s[i] == '1') b |= (1u << i);
        }
        return InputPoint(b, static_cast<int>(s.size()));
    }

    friend bool operator==(const InputPoint& a, const InputPoint& b) {
        return a.n == b.n && a.bits == b.bits;
    }
    friend bool operator<(const InputPoint& a, const InputPoint& b) { return a.bits < b.bits; }
};

// Dense total function {0,1}^n -> {0,1}, one bit per input index.
class TruthTable {
public:
    TruthTable() = default;
    explicit TruthTable(int n, bool fill = false)
        : n_(n), words_((size_t(1) << n) <= 64 ? 1 : (size_t(1) << n) / 64,
                        fill ? ~0ull : 0ull) {
        require(n >= 0 && n <= kMaxDimension, "TruthTable: dimension out of range");
        trim();
    }

    int dimension() const { return n_; }
    std::uint64_t domain_size() const { return std::uint64_t(1) << n_; }

    bool get(std::uint32_t index) const { return (words_[index >> 6] >> (index & 63)) & 1ull; }
    bool evaluate(const InputPoint& x) const {
        require(x.n == n_, "TruthTable::evaluate: dimension mismatch");
        return get(x.bits);
    }

    void set(std::uint32_t index, bool value) {
        std::uint64_t m = 1ull << (index & 63);
        if (value)
            words_[index >> 6] |= m;
        else
            words_[index >> 6] &= ~m;
    }
    void flip(std::uint32_t index) { words_[index >> 6] ^= 1ull << (index & 63); }

    std::uint64_t popcount() const {
        std::uint64_t c = 0;
        for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
        return c;
    }

    std::uint64_t hamming(const TruthTable& other) const {
        require(other.n_ == n_, "TruthTable::hamming: dimension mismatch");
        std::uint64_t c = 0;
        for (size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::uint64_t>(std::popcount(words_[i] ^ other.words_[i]));
        return c;
    }

    // Hex serialization, little-endian over the input index: nibble k covers
    // indices 4k..4k+3 with index 4k as its least significant bit.
    std::string to_hex() const {
        std::uint64_t nibbles = std::max<std::uint64_t>(1, domain_size() / 4);
        std::string s;
        s.reserve(nibbles);
        for (std::uint64_t k = 0; k < nibbles; ++k) {
            unsigned v = static_cast<unsigned>((words_[(4 * k) >> 6] >> ((4 * k) & 63)) & 0xF);
            s.push_back("0123456789abcdef"[v]);
        }
        return s;
    }

    static TruthTable from_hex(int n, const std::string& hex) {
        TruthTable t(n);
        std::uint64_t nibbles = std::max<std::uint64_t>(1, t.domain_size() / 4);
        require(hex.size() == nibbles, "TruthTable::from_hex: wrong length");
        for (std::uint64_t k = 0; k < nibbles; ++k) {
            char c = hex[k];
            unsigned v;
            if (c >= '0' && c <= '9')
                v = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                v = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                v = static_cast<unsigned>(c - 'A' + 10);
            else
                throw ContractError("TruthTable::from_hex: bad character");
            t.words_[(4 * k) >> 6] |= static_cast<std::uint64_t>(v) << ((4 * k) & 63);
        }
        t.trim();
        return t;
    }

    friend bool operator==(const TruthTable& a, const TruthTable& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    void trim() {
        if (n_ < 6) words_[0] &= (1ull << (1u << n_)) - 1ull;
    }

    int n_ = 0;
    std::vector<std::uint64_t> words_{0};
};

// Dense probability vector over {0,1}^n.
class InputDistribution {
public:
    InputDistribution() = default;

    InputDistribution(int n, std::vector<double> mass) : n_(n), mass_(std::move(mass)) {
        require(n >= 0 && n <= kMaxDimension, "InputDistribution: dimension out of range");
        require(mass_.size() == (size_t(1) << n), "InputDistribution: mass vector has wrong length");
        double sum = 0.0;
        for (double p : mass_) {
            require(p >= 0.0, "InputDistribution: negative mass");
            sum += p;
        }
        require(std::abs(sum - 1.0) <= 1e-12, "InputDistribution: masses must sum to 1");
        rebuild();
    }

    static InputDistribution uniform(int n) {
        return InputDistribution(n, std::vector<double>(size_t(1) << n, 1.0 / double(std::uint64_t(1) << n)));
    }

    static InputDistribution point_mass(int n, InputPoint x) {
        require(x.n == n, "InputDistribution::point_mass: dimension mismatch");
        std::vector<double> m(size_t(1) << n, 0.0);
        m[x.bits] = 1.0;
        return InputDistribution(n, m);
    }

    int dimension() const { return n_; }
    double mass(std::uint32_t index) const { return mass_[index]; }
    double mass(const InputPoint& x) const {
        require(x.n == n_, "InputDistribution::mass: dimension mismatch");
        return mass_[x.bits];
    }
    const std::vector<double>& masses() const { return mass_; }
    const std::vector<std::uint32_t>& support() const { return support_; }
    bool is_uniform() const { return uniform_; }

    InputPoint sample(RandomSource& rng) const {
        double u = rng.next_double();
        // cumulative_ runs over support points only and ends at exactly 1.0
        size_t idx = static_cast<size_t>(
            std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
        if (idx >= support_.size()) idx = support_.size() - 1;
        return InputPoint(support_[idx], n_);
    }

private:
    void rebuild() {
        support_.clear();
        cumulative_.clear();
        double acc = 0.0;
        for (std::uint32_t i = 0; i < mass_.size(); ++i) {
            if (mass_[i] > 0.0) {
                acc += mass_[i];
                support_.push_back(i);
                cumulative_.push_back(acc);
            }
        }
        require(!support_.empty(), "InputDistribution: empty support");
        cumulative_.back() = 1.0;
        uniform_ = support_.size() == mass_.size();
        if (uniform_) {
            double p = mass_[0];
            for (double q : mass_)
                if (q != p) {
                    uniform_ = false;
                    break;
                }
        }
    }

    int n_ = 0;
    std::vector<double> mass_{1.0};
    std::vector<std::uint32_t> support_{0};
    std::vector<double> cumulative_{1.0};
    bool uniform_ = true;
};

struct LabeledExample {
    InputPoint point;
    bool label = false;
};

// P_{x~D}(f(x) != g(x)), summed exactly over the support (no sampling).
inline double distance(const TruthTable& f, const TruthTable& g, const InputDistribution& D) {
    require(f.dimension() == g.dimension() && f.dimension() == D.dimension(),
            "distance: dimension mismatch");
    if (D.is_uniform())
        return static_cast<double>(f.hamming(g)) / static_cast<double>(f.domain_size());
    double d = 0.0;
    for (std::uint32_t x : D.support())
        if (f.get(x) != g.get(x)) d += D.mass(x);
    return d;
}

// One draw from the example oracle Ex(f, D).
inline LabeledExample sample_example(const TruthTable& f, const InputDistribution& D,
                                     RandomSource& rng) {
    require(f.dimension() == D.dimension(), "sample_example: dimension mismatch");
    InputPoint x = D.sample(rng);
    return LabeledExample{x, f.evaluate(x)};
}

// A backdoored function is valid when it stays eps-close to the original
// under D yet disagrees at the trigger.
inline bool is_epsilon_valid(const TruthTable& f, const TruthTable& fstar,
                             const InputDistribution& D, double eps, const InputPoint& xstar) {
    require(eps > 0.0, "is_epsilon_valid: eps must be positive");
    require(f.dimension() == fstar.dimension() && f.dimension() == xstar.n,
            "is_epsilon_valid: dimension mismatch");
    if (f.evaluate(xstar) == fstar.evaluate(xstar)) return false;
    return distance(f, fstar, D) <= eps;
}

}  // namespace bdgame
