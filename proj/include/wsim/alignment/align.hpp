#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wsim::align {

/// Ranking statistic logit(p) - logit(u), with p and u clamped into (0, 1).
double binary_statistic(double p, double u) noexcept;

/// Flags the k units with the highest statistic; ties go to the lower id.
std::vector<std::uint8_t> select_top_k(std::span<const double> statistic, std::span<const std::int64_t> ids,
                                       std::size_t k);

/// Selects exactly k units ranked by logit(p) - logit(u) descending.
/// Throws InfeasibleError when k > n.
std::vector<std::uint8_t> align_binary(std::span<const double> p, std::span<const double> u,
                                       std::span<const std::int64_t> ids, std::size_t k);

/// Gumbel-max score log p - log(-log u).
double multinomial_score(double p, double u) noexcept;

/// Assigns each unit one of k outcomes so that outcome j receives exactly
/// targets[j] units. `scores` is row-major n x k. Outcomes are filled in index
/// order: outcome j takes the targets[j] unassigned units with the largest
/// margin of score j over their best score among outcomes j+1..k-1; the last
/// outcome takes the rest. Throws InfeasibleError when targets do not sum to n.
std::vector<int> align_multinomial(std::span<const double> scores, int k, std::span<const std::int64_t> ids,
                                   std::span<const std::size_t> targets);

/// Unaligned assignment: row argmax of the scores.
std::vector<int> argmax_rows(std::span<const double> scores, int k);

/// Multiplies every value by target_total / current total. Throws
/// InfeasibleError when the current total is zero and the target is not.
std::vector<double> align_continuous(std::span<const double> values, double target_total);
std::vector<double> align_continuous_mean(std::span<const double> values, double target_mean);

/// Integer counts proportional to non-negative weights that sum exactly to
/// total (largest remainder; ties go to the lower index). Throws
/// InfeasibleError when total > 0 and every weight is zero.
std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total);

} // namespace wsim::align
