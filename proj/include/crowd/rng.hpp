#pragma once

#include <cstdint>

namespace crowd {

/// Counter-derived pseudo-random stream (SplitMix64 core).
///
/// Draws are defined bit-for-bit here rather than through <random>
/// distributions, whose output differs between standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();

    /// Standard normal via Box-Muller (one value per two uniforms).
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

/// Stream id used for the commit-order permutation of a tick.
inline constexpr std::uint64_t kCommitStreamId = ~std::uint64_t{0};

/// Deterministic, independent stream for (seed, tick, agent_id).
RandomStream rng_stream(std::uint64_t seed, std::uint64_t tick, std::uint64_t agent_id);

}  // namespace crowd
