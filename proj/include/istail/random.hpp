#pragma once

#include <concepts>
#include <cstdint>
#include <random>

namespace istail {

/// Derives an independent sub-stream seed from a top-level seed and an index.
///
/// This is the SplitMix64 finalizer applied to seed + k*golden_gamma, so
/// mix_seed(0, k) reproduces the canonical SplitMix64 output sequence.  The
/// exact mixing is part of the reproducibility contract: nested derivations
/// (experiment seed -> level seed -> replication seed) must give the same
/// streams on every platform.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Anything that produces iid uniforms on (0,1).  Samplers are templated on
/// this so tests can replay pinned sequences.
template <typename S>
concept UniformSource = requires(S s) {
    { s.uniform() } -> std::convertible_to<double>;
};

/// Mersenne Twister backed uniform stream.
///
/// uniform() maps the top 53 bits of one 64-bit draw to (k + 0.5) * 2^-53,
/// which lies strictly inside (0,1); neither endpoint can occur, so inverse
/// transforms never divide by zero or take log of zero.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(mix_seed(seed, index));
    }

    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

static_assert(UniformSource<RandomStream>);

}  // namespace istail
