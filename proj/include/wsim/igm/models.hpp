#pragma once

#include "wsim/core/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wsim::igm {

struct FitOptions {
    double tol = 1e-8;       ///< gradient norm of the mean log-likelihood
    int max_iter = 100;
    double ridge = 1e-8;     ///< added to the Hessian diagonal
    double separation_norm = 1e6;
};

/// Logistic presence model.
struct BinaryModelParams {
    std::string equation;
    std::vector<std::string> covariates; ///< covariate tokens
    std::vector<std::string> names;      ///< expanded column names
    Eigen::VectorXd coef;
    Eigen::VectorXd std_errors;
    std::vector<double> fitted; ///< fitted probabilities on the estimation data
    int iterations = 0;
    double gradient_norm = 0.0;
    std::vector<double> loglik_trace; ///< mean log-likelihood, start value then one per iteration

    [[nodiscard]] double probability(double eta) const noexcept;
};

/// Softmax model; column 0 of `coef` is the reference outcome and stays zero.
struct MultinomialModelParams {
    std::string equation;
    std::vector<std::string> covariates;
    std::vector<std::string> names;
    std::vector<int> outcomes; ///< outcome codes, index = column of coef
    Eigen::MatrixXd coef;      ///< p x K
    Eigen::MatrixXd std_errors;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::vector<double> loglik_trace;

    [[nodiscard]] int outcome_count() const noexcept { return static_cast<int>(outcomes.size()); }
    /// Softmax probabilities for a covariate row, written to `out` (size K).
    void probabilities(const Eigen::Ref<const Eigen::RowVectorXd> &x, std::span<double> out) const;
};

/// Log-linear level model.
struct LevelModelParams {
    std::string equation;
    std::vector<std::string> covariates;
    std::vector<std::string> names;
    Eigen::VectorXd coef;
    Eigen::VectorXd std_errors;
    double residual_sd = 0.0;
};

double log_likelihood(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &beta);
/// Gradient of the mean log-likelihood.
Eigen::VectorXd score(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &beta);

/// Logistic regression by IRLS with step-halving. Throws ValidationError on a
/// constant outcome, SeparationError on separation and ConvergenceError when
/// the gradient norm is still above tol after max_iter iterations.
BinaryModelParams fit_binary(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const FitOptions &options = {});

/// Multinomial logit by damped Newton. `y` holds outcome indices 0..k-1.
MultinomialModelParams fit_multinomial(const Eigen::MatrixXd &x, std::span<const int> y, int k,
                                       const FitOptions &options = {});

/// OLS on log levels. Throws ValidationError naming the 1-based row of the
/// first nonpositive level.
LevelModelParams fit_level(const Eigen::MatrixXd &x, std::span<const double> levels);

/// Disturbances of a level equation: recovered for observed persons, drawn
/// N(0, sd) from (seed, person id, stream) otherwise.
class ResidualStore {
  public:
    ResidualStore() = default;
    ResidualStore(std::string equation, double sd, std::uint64_t seed, rng::Stream stream)
        : equation_(std::move(equation)), sd_(sd), seed_(seed), stream_(stream) {}

    void set_observed(std::int64_t id, double eps);
    void set_drawn(std::int64_t id);

    [[nodiscard]] bool contains(std::int64_t id) const { return entries_.count(id) != 0; }
    [[nodiscard]] bool observed(std::int64_t id) const;
    /// Stored residual, or the deterministic draw for ids not in the store.
    [[nodiscard]] double get(std::int64_t id) const;
    [[nodiscard]] double draw(std::int64_t id) const;

    [[nodiscard]] double sd() const noexcept { return sd_; }
    [[nodiscard]] const std::string &equation() const noexcept { return equation_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

  private:
    struct Entry {
        double eps;
        bool observed;
    };
    std::string equation_;
    double sd_ = 0.0;
    std::uint64_t seed_ = 0;
    rng::Stream stream_ = rng::Stream::earnings_level;
    std::unordered_map<std::int64_t, Entry> entries_;
};

/// `levels[i] > 0` marks an observed level; anything else is unobserved.
ResidualStore recover_residuals(const LevelModelParams &params, const Eigen::MatrixXd &x,
                                std::span<const double> levels, std::span<const std::int64_t> ids,
                                std::uint64_t seed, rng::Stream stream);

} // namespace wsim::igm
