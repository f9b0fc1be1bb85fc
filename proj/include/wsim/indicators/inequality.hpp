#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace wsim::ind {

/// Gini coefficient, weights default to 1. Sort-based, O(n log n).
/// Throws ValidationError on negative values, an all-zero vector or bad weights.
double gini(std::span<const double> values, std::span<const double> weights = {});

/// Concentration index of `amounts` with units ordered by `ranking`; tied
/// ranking values share their mid-rank. Throws ValidationError when the
/// weighted mean amount is zero.
double concentration_index(std::span<const double> amounts, std::span<const double> ranking,
                           std::span<const double> weights = {});

enum class KakwaniConvention {
    concentration_minus_gini, ///< C_benefit - G_pre: negative for a progressive benefit
    gini_minus_concentration, ///< G_pre - C_benefit: positive for a progressive benefit
};

std::string_view to_string(KakwaniConvention c);
KakwaniConvention parse_kakwani_convention(std::string_view s);

struct KakwaniResult {
    double value = 0.0;
    KakwaniConvention convention = KakwaniConvention::concentration_minus_gini;
};

KakwaniResult kakwani(std::span<const double> benefits, std::span<const double> pre_income, KakwaniConvention convention,
                      std::span<const double> weights = {});

/// gini(without) - gini(with).
double reynolds_smolensky(std::span<const double> income_without, std::span<const double> income_with,
                          std::span<const double> weights = {});

/// Groups 1..k of equal weight by ascending value (ties by position). A unit
/// belongs to the group containing the midpoint of its weight interval.
std::vector<int> quantile_groups(std::span<const double> values, std::span<const double> weights, int k);
inline std::vector<int> decile_groups(std::span<const double> values, std::span<const double> weights = {}) {
    return quantile_groups(values, weights, 10);
}

/// Weighted mean of `values` within each group 1..k; NaN for empty groups.
std::vector<double> group_means(std::span<const double> values, std::span<const int> groups,
                                std::span<const double> weights, int k);

namespace reference {
/// O(n^2) pairwise-difference Gini.
double gini_pairwise(std::span<const double> values, std::span<const double> weights = {});
/// O(n^2) concentration index: mean over pairs of sign(rank_i - rank_j) (a_i - a_j) / (2 mu).
double concentration_pairwise(std::span<const double> amounts, std::span<const double> ranking,
                              std::span<const double> weights = {});
} // namespace reference

} // namespace wsim::ind
