#include "wsim/core/error.hpp"
#include "wsim/igm/models.hpp"

#include <cmath>

namespace wsim::igm {

namespace {

// Row-wise softmax of eta (n x K) into prob; returns the mean log-likelihood.
double softmax_rows(const Eigen::MatrixXd &eta, std::span<const int> y, Eigen::MatrixXd &prob) {
    const auto n = eta.rows();
    const auto k = eta.cols();
    prob.resize(n, k);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = eta.row(i).maxCoeff();
        double z = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            prob(i, j) = std::exp(eta(i, j) - m);
            z += prob(i, j);
        }
        prob.row(i) /= z;
        ll += eta(i, y[static_cast<std::size_t>(i)]) - m - std::log(z);
    }
    return ll / static_cast<double>(n);
}

Eigen::MatrixXd unpack(const Eigen::VectorXd &theta, Eigen::Index p, Eigen::Index k) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, k);
    for (Eigen::Index c = 1; c < k; ++c) b.col(c) = theta.segment((c - 1) * p, p);
    return b;
}

} // namespace

void MultinomialModelParams::probabilities(const Eigen::Ref<const Eigen::RowVectorXd> &x, std::span<double> out) const {
    const auto k = coef.cols();
    double m = -INFINITY;
    for (Eigen::Index j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j)] = x.dot(coef.col(j));
        m = std::max(m, out[static_cast<std::size_t>(j)]);
    }
    double z = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j)] = std::exp(out[static_cast<std::size_t>(j)] - m);
        z += out[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] /= z;
}

MultinomialModelParams fit_multinomial(const Eigen::MatrixXd &x, std::span<const int> y, int k,
                                       const FitOptions &options) {
    if (k < 2) throw ValidationError("fit_multinomial: need at least two outcomes");
    const auto n = x.rows();
    const auto p = x.cols();
    if (n == 0 || static_cast<Eigen::Index>(y.size()) != n)
        throw ValidationError("fit_multinomial: design and outcome sizes differ or are empty");
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= k) throw ValidationError("fit_multinomial: outcome out of range", i + 1);
        ++counts[static_cast<std::size_t>(y[i])];
    }
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] == static_cast<std::size_t>(n))
            throw ValidationError("fit_multinomial: constant outcome");
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw ValidationError("fit_multinomial: outcome " + std::to_string(c) + " never observed");
    }

    const Eigen::Index q = (k - 1) * p;
    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd prob;
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n, k);
    double ll = softmax_rows(eta, y, prob);

    MultinomialModelParams out;
    out.loglik_trace.push_back(ll);
    Eigen::VectorXd grad(q);
    Eigen::MatrixXd hess(q, q);
    Eigen::MatrixXd xw(n, p);
    // Information matrix of the mean log-likelihood at the current prob.
    auto build_hessian = [&] {
        for (Eigen::Index a = 1; a < k; ++a)
            for (Eigen::Index b = a; b < k; ++b) {
                const Eigen::ArrayXd w = prob.col(a).array() * ((a == b ? 1.0 : 0.0) - prob.col(b).array());
                xw = x.array().colwise() * w;
                const Eigen::MatrixXd block = x.transpose() * xw * inv_n;
                hess.block((a - 1) * p, (b - 1) * p, p, p) = block;
                if (a != b) hess.block((b - 1) * p, (a - 1) * p, p, p) = block.transpose();
            }
    };

    for (int iter = 0;; ++iter) {
        for (Eigen::Index c = 1; c < k; ++c) {
            Eigen::VectorXd r = -prob.col(c);
            for (Eigen::Index i = 0; i < n; ++i)
                if (y[static_cast<std::size_t>(i)] == c) r[i] += 1.0;
            grad.segment((c - 1) * p, p) = x.transpose() * r * inv_n;
        }
        out.gradient_norm = grad.norm();
        out.iterations = iter;
        if (out.gradient_norm < options.tol) break;
        if (iter >= options.max_iter)
            throw ConvergenceError("fit_multinomial: no convergence in " + std::to_string(options.max_iter) +
                                       " iterations",
                                   out.gradient_norm);

        build_hessian();
        hess.diagonal().array() += options.ridge;
        const Eigen::VectorXd step = hess.ldlt().solve(grad);

        const double slack = 1e-14 * (1.0 + std::abs(ll));
        double t = 1.0;
        Eigen::VectorXd trial = theta + step;
        Eigen::MatrixXd trial_prob;
        double trial_ll = softmax_rows(x * unpack(trial, p, k), y, trial_prob);
        for (int h = 0; h < 40 && !(trial_ll >= ll - slack); ++h) {
            t *= 0.5;
            trial = theta + t * step;
            trial_ll = softmax_rows(x * unpack(trial, p, k), y, trial_prob);
        }
        if (!(trial_ll >= ll - slack)) throw ConvergenceError("fit_multinomial: line search failed", out.gradient_norm);
        theta = trial;
        prob = std::move(trial_prob);
        ll = trial_ll;
        out.loglik_trace.push_back(ll);
        if (!theta.allFinite() || theta.norm() > options.separation_norm)
            throw SeparationError("fit_multinomial: coefficient norm exceeds " +
                                  std::to_string(options.separation_norm) + " (perfect separation)");
    }

    out.coef = unpack(theta, p, k);
    out.std_errors = Eigen::MatrixXd::Zero(p, k);
    build_hessian();
    const Eigen::VectorXd var = (hess * static_cast<double>(n)).ldlt().solve(Eigen::MatrixXd::Identity(q, q)).diagonal();
    out.std_errors = unpack(var.cwiseMax(0.0).cwiseSqrt(), p, k);
    for (int c = 0; c < k; ++c) out.outcomes.push_back(c);
    return out;
}

} // namespace wsim::igm
