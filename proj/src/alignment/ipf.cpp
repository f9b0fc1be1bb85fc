#include "wsim/alignment/ipf.hpp"
#include "wsim/core/error.hpp"

#include <cmath>

namespace wsim::align {

double margin_residual(const Eigen::MatrixXd &m, const Eigen::VectorXd &rows, const Eigen::VectorXd &cols) {
    const double r = (m.rowwise().sum() - rows).cwiseAbs().maxCoeff();
    const double c = (m.colwise().sum().transpose() - cols).cwiseAbs().maxCoeff();
    return std::max(r, c);
}

IpfResult ipf(const IpfProblem &problem, double tol, int max_iter) {
    const auto &seed = problem.seed;
    const auto &rows = problem.row_margins;
    const auto &cols = problem.col_margins;
    if (seed.rows() != rows.size() || seed.cols() != cols.size() || seed.size() == 0)
        throw ValidationError("ipf: seed shape does not match the margins");
    if (!seed.allFinite() || (seed.array() < 0.0).any()) throw ValidationError("ipf: seed must be finite and non-negative");
    if (!rows.allFinite() || !cols.allFinite() || (rows.array() < 0.0).any() || (cols.array() < 0.0).any())
        throw ValidationError("ipf: margins must be finite and non-negative");
    const double rs = rows.sum();
    const double cs = cols.sum();
    if (std::abs(rs - cs) > 1e-9 * std::max(1.0, std::max(rs, cs)))
        throw InfeasibleError("ipf: row margins sum to " + std::to_string(rs) + " but column margins to " +
                              std::to_string(cs));
    const Eigen::VectorXd seed_rows = seed.rowwise().sum();
    const Eigen::VectorXd seed_cols = seed.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < rows.size(); ++i)
        if (rows[i] > 0.0 && seed_rows[i] == 0.0)
            throw InfeasibleError("ipf: row " + std::to_string(i) + " has a positive margin but an all-zero seed");
    for (Eigen::Index j = 0; j < cols.size(); ++j)
        if (cols[j] > 0.0 && seed_cols[j] == 0.0)
            throw InfeasibleError("ipf: column " + std::to_string(j) + " has a positive margin but an all-zero seed");

    IpfResult out;
    out.fitted = seed;
    out.residual = margin_residual(out.fitted, rows, cols);
    while (out.residual >= tol) {
        if (out.iterations >= max_iter)
            throw ConvergenceError("ipf: no convergence in " + std::to_string(max_iter) + " iterations", out.residual);
        const Eigen::VectorXd r = out.fitted.rowwise().sum();
        for (Eigen::Index i = 0; i < r.size(); ++i) out.fitted.row(i) *= r[i] > 0.0 ? rows[i] / r[i] : 0.0;
        const Eigen::VectorXd c = out.fitted.colwise().sum().transpose();
        for (Eigen::Index j = 0; j < c.size(); ++j) out.fitted.col(j) *= c[j] > 0.0 ? cols[j] / c[j] : 0.0;
        ++out.iterations;
        out.residual = margin_residual(out.fitted, rows, cols);
    }
    return out;
}

} // namespace wsim::align
