#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/function_class.hpp"

namespace bdgame {

namespace detail {

inline std::uint64_t rotl64(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

// SipHash-2-4 over a single 8-byte message block. The doubling function of
// the GGM tree is built from this keyed primitive in counter mode; the key
// constants below are fixed implementation constants.
inline std::uint64_t siphash24_u64(std::uint64_t k0, std::uint64_t k1, std::uint64_t m) {
    std::uint64_t v0 = k0 ^ 0x736f6d6570736575ull;
    std::uint64_t v1 = k1 ^ 0x646f72616e646f6dull;
    std::uint64_t v2 = k0 ^ 0x6c7967656e657261ull;
    std::uint64_t v3 = k1 ^ 0x7465646279746573ull;

    auto round = [&] {
        v0 += v1;
        v1 = rotl64(v1, 13);
        v1 ^= v0;
        v0 = rotl64(v0, 32);
        v2 += v3;
        v3 = rotl64(v3, 16);
        v3 ^= v2;
        v0 += v3;
        v3 = rotl64(v3, 21);
        v3 ^= v0;
        v2 += v1;
        v1 = rotl64(v1, 17);
        v1 ^= v2;
        v2 = rotl64(v2, 32);
    };

    v3 ^= m;
    round();
    round();
    v0 ^= m;

    std::uint64_t last = 8ull << 56;  // length block, no residual bytes
    v3 ^= last;
    round();
    round();
    v0 ^= last;

    v2 ^= 0xff;
    round();
    round();
    round();
    round();
    return v0 ^ v1 ^ v2 ^ v3;
}

constexpr std::uint64_t kGgmKey0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kGgmKey1 = 0xBF58476D1CE4E5B9ull;

}  // namespace detail

// Seed of a GGM tree over {0,1}^n; node values are 2n bits wide.
struct GgmKey {
    int n = 0;
    std::uint64_t seed = 0;  // low 2n bits

    GgmKey(int dim, std::uint64_t s) : n(dim), seed(s & mask(dim)) {
        require(dim >= 1 && dim <= kMaxDimension, "GgmKey: dimension out of range");
    }

    static std::uint64_t mask(int dim) { return (std::uint64_t(1) << (2 * dim)) - 1; }

    std::string to_hex() const {
        int digits = (2 * n + 3) / 4;
        std::string s(static_cast<size_t>(digits), '0');
        for (int i = 0; i < digits; ++i)
            s[static_cast<size_t>(digits - 1 - i)] = "0123456789abcdef"[(seed >> (4 * i)) & 0xF];
        return s;
    }

    friend bool operator==(const GgmKey& a, const GgmKey& b) {
        return a.n == b.n && a.seed == b.seed;
    }
};

// One level of tree descent: a keyed length-doubling step, truncated to the
// node width. The level index is folded in so levels use distinct functions.
inline std::uint64_t ggm_child(int n, std::uint64_t node, int level, bool bit) {
    std::uint64_t msg = node | (static_cast<std::uint64_t>(level) << 48) |
                        (static_cast<std::uint64_t>(bit ? 1 : 0) << 56);
    return detail::siphash24_u64(detail::kGgmKey0, detail::kGgmKey1, msg) & GgmKey::mask(n);
}

inline bool ggm_eval(const GgmKey& key, const InputPoint& x) {
    require(x.n == key.n, "ggm_eval: dimension mismatch");
    std::uint64_t node = key.seed;
    for (int i = 0; i < key.n; ++i) node = ggm_child(key.n, node, i, x.bit(i));
    return node & 1;
}

// Co-path of the trigger: enough node values to rebuild every leaf except
// the punctured one.
struct PuncturedKey {
    InputPoint punctured_point;
    std::vector<std::uint64_t> copath;  // copath[i] = sibling at level i
    int n = 0;
};

inline PuncturedKey ggm_puncture(const GgmKey& key, const InputPoint& xstar) {
    require(xstar.n == key.n, "ggm_puncture: dimension mismatch");
    PuncturedKey pk;
    pk.punctured_point = xstar;
    pk.n = key.n;
    std::uint64_t node = key.seed;
    for (int i = 0; i < key.n; ++i) {
        pk.copath.push_back(ggm_child(key.n, node, i, !xstar.bit(i)));
        node = ggm_child(key.n, node, i, xstar.bit(i));
    }
    return pk;
}

inline bool punctured_eval(const PuncturedKey& pk, const InputPoint& x) {
    require(x.n == pk.n, "punctured_eval: dimension mismatch");
    if (x.bits == pk.punctured_point.bits)
        throw ContractError("punctured_eval: undefined at the punctured point");
    int j = 0;
    while (x.bit(j) == pk.punctured_point.bit(j)) ++j;
    std::uint64_t node = pk.copath[static_cast<size_t>(j)];
    for (int i = j + 1; i < pk.n; ++i) node = ggm_child(pk.n, node, i, x.bit(i));
    return node & 1;
}

// 2^n keyed functions standing in for a family of independent random
// functions; member index k is the key k zero-extended to the seed width.
class PrfClass : public FunctionClass {
public:
    explicit PrfClass(int n, bool materialize = true) : n_(n) {
        require_budget(n >= 1 && n <= 14, "PrfClass: exhaustive-scan budget is n <= 14");
        if (materialize && n <= 12) {
            tables_.reserve(size_t(1) << n);
            for (std::uint64_t k = 0; k < (std::uint64_t(1) << n); ++k) {
                TruthTable t(n);
                GgmKey key(n, k);
                for (std::uint32_t x = 0; x < (1u << n); ++x)
                    t.set(x, ggm_eval(key, InputPoint(x, n)));
                tables_.push_back(std::move(t));
            }
        }
    }

    std::string kind() const override { return "prf"; }
    int dimension() const override { return n_; }
    std::uint64_t size() const override { return std::uint64_t(1) << n_; }
    bool evaluate(std::uint64_t index, const InputPoint& x) const override {
        if (!tables_.empty()) return tables_[index].evaluate(x);
        return ggm_eval(GgmKey(n_, index), x);
    }
    const TruthTable* cached_table(std::uint64_t index) const override {
        return tables_.empty() ? nullptr : &tables_[index];
    }
    std::string member_name(std::uint64_t index) const override {
        return "K=" + GgmKey(n_, index).to_hex();
    }
    GgmKey key_of(std::uint64_t index) const { return GgmKey(n_, index); }

private:
    int n_;
    std::vector<TruthTable> tables_;
};

struct PairwiseScan {
    double min_distance = 1.0;
    std::uint64_t arg_i = 0;
    std::uint64_t arg_j = 0;
};

// Exhaustive pairwise function distance under the uniform distribution. The
// minimum is measured, never assumed: near-identical keys would show up here.
inline PairwiseScan min_pairwise_distance(const FunctionClass& cls) {
    require_budget(cls.size() <= (std::uint64_t(1) << 14), "min_pairwise_distance: class too large");
    std::vector<TruthTable> tables;
    tables.reserve(cls.size());
    for (std::uint64_t i = 0; i < cls.size(); ++i) tables.push_back(cls.table_of(i));
    double domain = static_cast<double>(std::uint64_t(1) << cls.dimension());
    PairwiseScan scan;
    for (std::uint64_t i = 0; i < cls.size(); ++i)
        for (std::uint64_t j = i + 1; j < cls.size(); ++j) {
            double d = static_cast<double>(tables[i].hamming(tables[j])) / domain;
            if (d < scan.min_distance) {
                scan.min_distance = d;
                scan.arg_i = i;
                scan.arg_j = j;
            }
        }
    return scan;
}

}  // namespace bdgame
