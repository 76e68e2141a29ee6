#pragma once

#include <cstdint>

namespace bdgame {

// Counter-based deterministic generator. Each (seed, stream) pair yields an
// independent, replayable sequence; trials get their own stream ids so they
// can run on any number of workers without changing results. All derived
// draws (doubles, bounded ints) are implemented here rather than with
// std::*_distribution, which is not bit-stable across standard libraries.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id), base_(mix(seed ^ mix(stream_id ^ 0x9E3779B97F4A7C15ull))) {}

    explicit RandomSource(std::uint64_t seed) : RandomSource(seed, 0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return mix(base_ ^ counter_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // Uniform in [0, bound). Fixed-point multiply; bias < 2^-64 is irrelevant
    // at desk scale and keeps the draw count deterministic.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next_u64()) * bound) >> 64);
    }

    // Independent child stream; forks with distinct tags never collide in
    // practice (splitmix avalanche over the 64-bit tag space).
    RandomSource fork(std::uint64_t tag) const {
        return RandomSource(seed_, mix(stream_ ^ mix(tag + 0xD1B54A32D192ED03ull)));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace bdgame
