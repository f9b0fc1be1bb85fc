#pragma once

#include "wsim/population/person.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace wsim::igm {

/// One covariate token. Categorical tokens expand to dummy columns with the
/// first level as reference; missing codes (kNoCode) give all-zero dummies.
struct Covariate {
    enum class Kind { intercept, age_band, gender, education, industry, occupation, sector, contract, age };
    Kind kind = Kind::intercept;
    int levels = 1; ///< number of categories for industry/occupation

    [[nodiscard]] int width() const noexcept;
    [[nodiscard]] std::string token() const;
};

inline constexpr int kDefaultIndustries = 12;
inline constexpr int kDefaultOccupations = 9;

/// Parses "intercept", "age_band", "gender", "education", "industry[:K]",
/// "occupation[:K]", "sector", "contract", "age". Throws ConfigError.
Covariate parse_covariate(std::string_view token);

class CovariateSet {
  public:
    CovariateSet() = default;
    explicit CovariateSet(std::vector<Covariate> covariates);
    /// Builds from tokens; throws ConfigError on unknown or duplicate tokens.
    static CovariateSet parse(const std::vector<std::string> &tokens);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] std::vector<std::string> tokens() const;
    /// Expanded column names, e.g. "age_band=25-34".
    [[nodiscard]] std::vector<std::string> names() const;

    void fill_row(const Person &p, double *out) const;
    [[nodiscard]] double linear_predictor(const Person &p, const Eigen::Ref<const Eigen::VectorXd> &coef) const;

    [[nodiscard]] Eigen::MatrixXd design(std::span<const Person> persons) const;
    [[nodiscard]] Eigen::MatrixXd design(std::span<const Person> persons, std::span<const std::size_t> rows) const;

  private:
    std::vector<Covariate> covariates_;
    int width_ = 0;
};

} // namespace wsim::igm
