#include "wsim/core/error.hpp"
#include "wsim/igm/models.hpp"

#include <cmath>

namespace wsim::igm {

LevelModelParams fit_level(const Eigen::MatrixXd &x, std::span<const double> levels) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (static_cast<Eigen::Index>(levels.size()) != n) throw ValidationError("fit_level: design and level sizes differ");
    if (n <= p) throw ValidationError("fit_level: need more rows than covariates");
    Eigen::VectorXd logy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = levels[static_cast<std::size_t>(i)];
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("fit_level: level must be positive", static_cast<std::size_t>(i + 1));
        logy[i] = std::log(v);
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < p) throw ValidationError("fit_level: design matrix is rank deficient");

    LevelModelParams out;
    out.coef = qr.solve(logy);
    const Eigen::VectorXd resid = logy - x * out.coef;
    const double rss = resid.squaredNorm();
    out.residual_sd = std::sqrt(rss / static_cast<double>(n - p));
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    out.std_errors = (xtx_inv.diagonal() * out.residual_sd * out.residual_sd).cwiseMax(0.0).cwiseSqrt();
    return out;
}

void ResidualStore::set_observed(std::int64_t id, double eps) {
    if (!std::isfinite(eps)) throw ValidationError("residual for person " + std::to_string(id) + " is not finite");
    entries_[id] = {eps, true};
}

void ResidualStore::set_drawn(std::int64_t id) { entries_[id] = {draw(id), false}; }

bool ResidualStore::observed(std::int64_t id) const {
    auto it = entries_.find(id);
    return it != entries_.end() && it->second.observed;
}

double ResidualStore::draw(std::int64_t id) const {
    return sd_ * rng::standard_normal(seed_, static_cast<std::uint64_t>(id), stream_);
}

double ResidualStore::get(std::int64_t id) const {
    auto it = entries_.find(id);
    return it != entries_.end() ? it->second.eps : draw(id);
}

ResidualStore recover_residuals(const LevelModelParams &params, const Eigen::MatrixXd &x,
                                std::span<const double> levels, std::span<const std::int64_t> ids,
                                std::uint64_t seed, rng::Stream stream) {
    if (static_cast<Eigen::Index>(levels.size()) != x.rows() || ids.size() != levels.size())
        throw ValidationError("recover_residuals: input sizes differ");
    ResidualStore store(params.equation, params.residual_sd, seed, stream);
    const Eigen::VectorXd xb = x * params.coef;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (levels[i] > 0.0)
            store.set_observed(ids[i], std::log(levels[i]) - xb[static_cast<Eigen::Index>(i)]);
        else
            store.set_drawn(ids[i]);
    }
    return store;
}

} // namespace wsim::igm
