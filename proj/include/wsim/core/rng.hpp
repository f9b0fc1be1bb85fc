#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random numbers. Every draw is a pure function of
// (seed, entity id, stream, counter), so results do not depend on the
// order in which entities are processed.
namespace wsim::rng {

/// Draw streams. Values are part of the reproducibility contract: never renumber.
enum class Stream : std::uint64_t {
    synth_household = 1,
    synth_person = 2,
    synth_earnings = 3,
    synth_income = 4,
    in_work = 10,
    employee = 11,
    industry = 12,
    occupation = 13,
    public_sector = 14,
    temporary = 15,
    unemployed = 16,
    capital_presence = 17,
    earnings_level = 20,
    capital_level = 21,
    cws_takeup = 30,
    pup_takeup = 31,
    share_holding = 32,
    new_entrant = 33,
};

constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t id, std::uint64_t stream,
                            std::uint64_t counter = 0) noexcept {
    std::uint64_t h = mix(seed);
    h = mix(h ^ id);
    h = mix(h ^ (stream * 0xD1342543DE82EF95ULL));
    return mix(h ^ counter);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t id, Stream stream, std::uint64_t counter = 0) noexcept {
    return key(seed, id, static_cast<std::uint64_t>(stream), counter);
}

/// Uniform on [0, 1).
template <class S>
constexpr double uniform(std::uint64_t seed, std::uint64_t id, S stream, std::uint64_t counter = 0) noexcept {
    return static_cast<double>(key(seed, id, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform on the open interval (0, 1).
template <class S>
constexpr double uniform_open(std::uint64_t seed, std::uint64_t id, S stream, std::uint64_t counter = 0) noexcept {
    return (static_cast<double>(key(seed, id, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal by Box-Muller over counters 2c and 2c+1.
template <class S>
inline double standard_normal(std::uint64_t seed, std::uint64_t id, S stream, std::uint64_t counter = 0) noexcept {
    const double u1 = uniform_open(seed, id, stream, 2 * counter);
    const double u2 = uniform(seed, id, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Index drawn from a discrete distribution given by (unnormalised) weights.
template <class Range>
inline int categorical(double u, const Range &weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double acc = 0.0;
    int i = 0;
    int last_positive = 0;
    for (double w : weights) {
        if (w > 0.0) last_positive = i;
        acc += w;
        if (u * total < acc) return i;
        ++i;
    }
    return last_positive;
}

} // namespace wsim::rng
