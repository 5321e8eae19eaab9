#pragma once

// Counter-free random substreams. Every simulated atom (or photon stream) owns
// a SplitMix64 generator seeded from (base_seed, index), so results never
// depend on how work is split across threads.

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace nullshadow {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream `index` under `base_seed`. Fixed forever: changing it
/// changes every published output.
constexpr std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(mix64(base_seed) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

/// SplitMix64 stream; satisfies std::uniform_random_bit_generator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

static_assert(std::uniform_random_bit_generator<SplitMix64>);

/// 64-bit generators only, so the bits-to-double mapping is identical everywhere.
template <typename G>
concept Uniform64Generator =
    std::uniform_random_bit_generator<G> && std::same_as<typename G::result_type, std::uint64_t> &&
    (G::min() == 0) && (G::max() == std::numeric_limits<std::uint64_t>::max());

/// Uniform variate in [0, 1) on the 2^-53 lattice.
template <Uniform64Generator G>
double uniform01(G& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace nullshadow
