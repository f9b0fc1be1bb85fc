#pragma once

#include "wsim/igm/models.hpp"
#include "wsim/population/person.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wsim::igm {

inline constexpr std::int8_t kUnobserved = -1;

struct PresenceDraw {
    double p = 0.0; ///< model probability
    double u = 0.0; ///< retained uniform draw
    bool flag = false;
};

/// Single-person kernel. For observed outcomes the draw is mapped into the
/// subinterval of [0, 1) that reproduces the outcome: [0, p) for 1, [p, 1) for 0.
PresenceDraw presence_draw(double p, std::uint64_t seed, std::int64_t id, rng::Stream stream,
                           std::int8_t observed = kUnobserved);

/// `observed` is empty or holds 0, 1 or kUnobserved per person.
std::vector<PresenceDraw> simulate_presence(const BinaryModelParams &params, std::span<const Person> persons,
                                            std::uint64_t seed, rng::Stream stream,
                                            std::span<const std::int8_t> observed = {});

/// exp(x'theta + eps) where present, 0 otherwise.
std::vector<double> simulate_level(const LevelModelParams &params, const ResidualStore &residuals,
                                   std::span<const Person> persons, std::span<const std::uint8_t> present);

/// Gumbel-max scores log p_j + g_j, one row per person. The simulated outcome
/// is the row argmax. For an observed outcome c the scores are drawn from the
/// conditional distribution given that c attains the maximum, so the argmax
/// reproduces c.
struct CategoricalDraws {
    int k = 0;
    std::vector<double> scores; ///< row-major n x k
    std::vector<int> outcome;   ///< column index of the row maximum

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {scores.data() + i * static_cast<std::size_t>(k), static_cast<std::size_t>(k)};
    }
};

void categorical_scores(std::span<const double> probs, std::uint64_t seed, std::int64_t id, rng::Stream stream,
                        int observed, std::span<double> out);

CategoricalDraws simulate_categorical(const MultinomialModelParams &params, std::span<const Person> persons,
                                      std::uint64_t seed, rng::Stream stream, std::span<const int> observed = {});

namespace reference {
// Serial implementations used as test oracles and benchmark baselines.
std::vector<PresenceDraw> simulate_presence(const BinaryModelParams &params, std::span<const Person> persons,
                                            std::uint64_t seed, rng::Stream stream,
                                            std::span<const std::int8_t> observed = {});
std::vector<double> simulate_level(const LevelModelParams &params, const ResidualStore &residuals,
                                   std::span<const Person> persons, std::span<const std::uint8_t> present);
} // namespace reference

} // namespace wsim::igm
