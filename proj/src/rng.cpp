#include "crowd/rng.hpp"

#include <cmath>

#include "crowd/geometry.hpp"

namespace crowd {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t RandomStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
    // Rejection on the top of the range removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next_u64();
    while (v >= limit) {
        v = next_u64();
    }
    return v % n;
}

RandomStream rng_stream(std::uint64_t seed, std::uint64_t tick, std::uint64_t agent_id) {
    std::uint64_t key = mix64(seed + kGolden);
    key = mix64(key ^ (tick * 0xD1B54A32D192ED03ull + 1));
    key = mix64(key ^ (agent_id * 0xAEF17502108EF2D9ull + 2));
    return RandomStream(key);
}

}  // namespace crowd
