#pragma once

#include <cstdint>

namespace ifs {

// Counter-based splittable random stream: the value at counter i is a
// SplitMix64-style hash of (key(seed, stream_id) + i * gamma). Identical
// (seed, stream_id) pairs reproduce identical sequences; distinct
// stream ids give statistically independent sequences. No global state.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id), base_(mix(seed ^ mix(stream_id + kGamma))) {}

    std::uint64_t next_u64() { return mix(base_ + (++counter_) * kGamma); }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Independent child stream; deterministic in (seed, stream_id, id).
    Stream substream(std::uint64_t id) const { return Stream(seed_, mix(stream_id_ + kGamma * (id + 1))); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace ifs
