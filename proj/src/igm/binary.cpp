#include "wsim/core/error.hpp"
#include "wsim/igm/models.hpp"

#include <cmath>

namespace wsim::igm {

namespace {

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

} // namespace

double BinaryModelParams::probability(double eta) const noexcept { return sigmoid(eta); }

double log_likelihood(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &beta) {
    const Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - softplus(eta[i]);
    return ll / static_cast<double>(eta.size());
}

Eigen::VectorXd score(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &beta) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd r(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) r[i] = y[i] - sigmoid(eta[i]);
    return x.transpose() * r / static_cast<double>(eta.size());
}

BinaryModelParams fit_binary(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const FitOptions &options) {
    const auto n = x.rows();
    const auto p = x.cols();
    if (n == 0 || y.size() != n) throw ValidationError("fit_binary: design and outcome sizes differ or are empty");
    double ones = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) throw ValidationError("fit_binary: outcome must be 0/1", static_cast<std::size_t>(i + 1));
        ones += y[i];
    }
    if (ones == 0.0 || ones == static_cast<double>(n)) throw ValidationError("fit_binary: constant outcome");

    BinaryModelParams out;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd prob(n), w(n);
    const double inv_n = 1.0 / static_cast<double>(n);

    auto ll_of = [&](const Eigen::VectorXd &e) {
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) ll += y[i] * e[i] - softplus(e[i]);
        return ll * inv_n;
    };
    double ll = ll_of(eta);
    out.loglik_trace.push_back(ll);
    Eigen::VectorXd grad(p);
    Eigen::MatrixXd hess(p, p);

    for (int iter = 0;; ++iter) {
        for (Eigen::Index i = 0; i < n; ++i) {
            prob[i] = sigmoid(eta[i]);
            w[i] = prob[i] * (1.0 - prob[i]);
        }
        grad = x.transpose() * (y - prob) * inv_n;
        out.gradient_norm = grad.norm();
        out.iterations = iter;
        if (out.gradient_norm < options.tol) break;
        if (iter >= options.max_iter)
            throw ConvergenceError("fit_binary: no convergence in " + std::to_string(options.max_iter) + " iterations",
                                   out.gradient_norm);

        hess.noalias() = x.transpose() * w.asDiagonal() * x * inv_n;
        hess.diagonal().array() += options.ridge;
        const Eigen::VectorXd step = hess.ldlt().solve(grad);

        const double slack = 1e-14 * (1.0 + std::abs(ll));
        double t = 1.0;
        Eigen::VectorXd trial = beta + step;
        Eigen::VectorXd trial_eta = x * trial;
        double trial_ll = ll_of(trial_eta);
        for (int h = 0; h < 40 && !(trial_ll >= ll - slack); ++h) {
            t *= 0.5;
            trial = beta + t * step;
            trial_eta = x * trial;
            trial_ll = ll_of(trial_eta);
        }
        if (!(trial_ll >= ll - slack)) {
            throw ConvergenceError("fit_binary: line search failed", out.gradient_norm);
        }
        beta = trial;
        eta = trial_eta;
        ll = trial_ll;
        out.loglik_trace.push_back(ll);
        if (!beta.allFinite() || beta.norm() > options.separation_norm)
            throw SeparationError("fit_binary: coefficient norm exceeds " + std::to_string(options.separation_norm) +
                                  " (perfect separation)");
    }

    // A coefficient vector that classifies every observation strictly correctly means the MLE does not exist.
    bool separated = true;
    for (Eigen::Index i = 0; i < n && separated; ++i) separated = y[i] > 0.5 ? eta[i] > 0.0 : eta[i] < 0.0;
    if (separated) throw SeparationError("fit_binary: outcome perfectly predicted (separation)");

    out.coef = beta;
    out.fitted.assign(prob.data(), prob.data() + n);
    const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    out.std_errors = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p)).diagonal().cwiseMax(0.0).cwiseSqrt();
    return out;
}

} // namespace wsim::igm
