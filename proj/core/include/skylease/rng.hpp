#pragma once

#include <cstdint>

namespace skylease {

// SplitMix64: tiny deterministic generator used for every random draw in the
// simulator. Substreams are derived by hashing a seed with fixed tags so that
// independent parts of a run (scenario generation, per-region action draws,
// mode randomization) never share state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Multiply-shift; bias is negligible
    // for the small ranges used here and the result is fully deterministic.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

// Order-sensitive hash of up to four 64-bit values into a substream seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0, std::uint64_t d = 0,
                              std::uint64_t e = 0) {
    SplitMix64 h(a);
    std::uint64_t s = h.next_u64();
    for (std::uint64_t v : {b, c, d, e}) {
        SplitMix64 g(s ^ (v + 0x9E3779B97F4A7C15ULL));
        s = g.next_u64();
    }
    return s;
}

// Substream tags. Each random purpose owns a tag so draws in one place can
// never shift draws in another.
namespace stream_tag {
inline constexpr std::uint64_t scenario = 0x5C31A510;
inline constexpr std::uint64_t agent = 0xA6E57ED5;
inline constexpr std::uint64_t mode_regions = 0x4E610125;
inline constexpr std::uint64_t mode_assign = 0xA5516400;
inline constexpr std::uint64_t replay = 0x4E91A7;
}  // namespace stream_tag

}  // namespace skylease
