#pragma once

#include <Eigen/Dense>

#include <vector>

namespace wsim::align {

struct IpfProblem {
    Eigen::MatrixXd seed; ///< non-negative
    Eigen::VectorXd row_margins;
    Eigen::VectorXd col_margins;
};

struct IpfResult {
    Eigen::MatrixXd fitted;
    int iterations = 0;
    double residual = 0.0; ///< max absolute margin residual
};

inline constexpr double kIpfTolerance = 1e-8;
inline constexpr int kIpfMaxIter = 1000;

/// Max absolute difference between the matrix margins and the targets.
double margin_residual(const Eigen::MatrixXd &m, const Eigen::VectorXd &rows, const Eigen::VectorXd &cols);

/// Alternating row/column scaling. Throws InfeasibleError when the margins
/// disagree or a positive margin meets an all-zero seed line, and
/// ConvergenceError (carrying the residual) after max_iter sweeps.
IpfResult ipf(const IpfProblem &problem, double tol = kIpfTolerance, int max_iter = kIpfMaxIter);

} // namespace wsim::align
