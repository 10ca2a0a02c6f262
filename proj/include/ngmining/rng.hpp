#pragma once

#include <cstdint>
#include <string_view>

namespace ngmining {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen for the simulator because
/// its identity is fully pinned by this header: same seed, same stream, on
/// any platform.
class SplitMix64 {
public:
    static constexpr std::string_view name = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in the open interval (0, 1); never returns 0 so it
    /// is safe under a logarithm.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace ngmining
