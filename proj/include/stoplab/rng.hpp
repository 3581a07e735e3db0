#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace stoplab {

// Philox4x32-10 counter-based generator.  Draws are keyed by
// (seed, path index, step index, substream), so path bundles are identical
// no matter in which order paths are generated.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t path_index = 0)
        : seed_(seed), path_(path_index) {}

    // Standard normal for a given step; substream selects independent draws
    // within the same step (0 = main driver, 1 = antithetic helper, ...).
    double normal(std::uint64_t step, std::uint32_t substream = 0) const {
        const auto r = block(step, substream);
        const double u1 = to_unit(r[0], r[1]);
        const double u2 = to_unit(r[2], r[3]);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double uniform(std::uint64_t step, std::uint32_t substream = 0) const {
        const auto r = block(step, substream);
        return to_unit(r[0], r[1]);
    }

private:
    std::array<std::uint32_t, 4> block(std::uint64_t step, std::uint32_t substream) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(step);
        std::uint32_t c1 = static_cast<std::uint32_t>(step >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(path_);
        std::uint32_t c3 = static_cast<std::uint32_t>(path_ >> 32) ^ substream;
        std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ULL * c0;
            const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9U;
            k1 += 0xBB67AE85U;
        }
        return {c0, c1, c2, c3};
    }

    static double to_unit(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t x = (static_cast<std::uint64_t>(a) << 32) | b;
        // strictly inside (0, 1) so Box-Muller logs stay finite
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t path_;
};

}  // namespace stoplab
