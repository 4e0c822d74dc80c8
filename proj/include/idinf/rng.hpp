#pragma once

#include <cstdint>

namespace idinf {

/// SplitMix64 (Steele, Lea, Flood 2014). Fixed so generated files are
/// reproducible on every platform: integer arithmetic only, and doubles are
/// built from the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    /// Independent stream for (seed, index), e.g. one per trial.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace idinf
