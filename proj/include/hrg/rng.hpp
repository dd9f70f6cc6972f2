#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every draw is a pure function of (seed, stream, index, block), so a value
// depends only on *which* draw it is and never on the order or the thread in
// which draws are made.

#include <array>
#include <cstdint>
#include <limits>

namespace hrg {

using Philox4x32Block = std::array<std::uint32_t, 4>;

inline Philox4x32Block philox4x32(Philox4x32Block ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

/// 53-bit uniform in [0, 1).
inline double to_unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Named random stream: a seed plus a stream id.  Draw `(index, block)`
/// returns two independent 64-bit words.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::array<std::uint64_t, 2> words(std::uint64_t index, std::uint32_t block = 0) const {
        const Philox4x32Block ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                     static_cast<std::uint32_t>(stream_) ^ (block * 0x85EBCA6Bu),
                                     static_cast<std::uint32_t>(stream_ >> 32)};
        const auto out = philox4x32(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        return {(std::uint64_t{out[0]} << 32) | out[1], (std::uint64_t{out[2]} << 32) | out[3]};
    }

    std::array<double, 2> uniforms(std::uint64_t index, std::uint32_t block = 0) const {
        const auto w = words(index, block);
        return {to_unit_double(w[0]), to_unit_double(w[1])};
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// Sequential UniformRandomBitGenerator on top of a CounterRng, for use with
/// the <random> distributions where per-draw addressing is not needed.
class PhiloxEngine {
public:
    using result_type = std::uint64_t;

    PhiloxEngine(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (have_ == 0) {
            buffer_ = rng_.words(counter_++);
            have_ = 2;
        }
        return buffer_[--have_];
    }

    double uniform() { return to_unit_double((*this)()); }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % bound;
    }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int have_ = 0;
};

// Stream ids used by the library, kept apart so that no two consumers of a
// seed ever read the same counter.
namespace streams {
inline constexpr std::uint64_t kPositions = 0x01;
inline constexpr std::uint64_t kPoissonCount = 0x02;
inline constexpr std::uint64_t kConditional = 0x03;
inline constexpr std::uint64_t kCalibration = 0x10;
inline constexpr std::uint64_t kPairs = 0x20;
inline constexpr std::uint64_t kBootstrap = 0x21;
inline constexpr std::uint64_t kClustering = 0x22;
inline constexpr std::uint64_t kProbeRoots = 0x30;
} // namespace streams

} // namespace hrg
