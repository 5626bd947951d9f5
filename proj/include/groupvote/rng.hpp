#pragma once

#include <cstdint>
#include <random>

#include "groupvote/partitions.hpp"

namespace groupvote {

// Name written into report headers. The engine's output sequence is fixed by
// the C++ standard; every derived quantity below is computed by hand rather
// than through <random> distributions, whose outputs vary between
// standard libraries.
inline constexpr const char* kRngName = "mt19937_64/splitmix64-split";

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent stream seed for (seed, stream) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    uint128 below(uint128 bound) {
        if (bound <= ~std::uint64_t{0}) return below(static_cast<std::uint64_t>(bound));
        const uint128 all = ~uint128{0};
        const uint128 limit = all - (all % bound);
        uint128 v;
        do {
            v = (static_cast<uint128>(next()) << 64) | next();
        } while (v >= limit);
        return v % bound;
    }

    // Inclusive range.
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    template <typename Vec>
    void shuffle(Vec& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(static_cast<std::uint64_t>(i)))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace groupvote
