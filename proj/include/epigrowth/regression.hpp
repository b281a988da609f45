#pragma once

#include "epigrowth/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace epigrowth
{

/// Ordinary least-squares estimate. With an intercept, coefficient 0 is the
/// constant and R^2 is centred; without one R^2 is uncentred.
struct OlsFit {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    double r_squared = 0;
    double residual_std_error = 0;
    std::size_t n_obs = 0;
    bool intercept = false;
};

/**
 * @brief Least squares via column-pivoted Householder QR.
 *
 * Columns are scaled to unit norm before factorisation so regressors of very
 * different magnitude (N and N^2) do not trip the rank test.
 */
inline OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, bool intercept)
{
    const Eigen::Index n = design.rows();
    if (response.size() != n) {
        throw InvalidArgument("design has " + std::to_string(n) + " rows but response has " +
                              std::to_string(response.size()));
    }
    Eigen::MatrixXd X(n, design.cols() + (intercept ? 1 : 0));
    if (intercept) {
        X.col(0).setOnes();
        X.rightCols(design.cols()) = design;
    }
    else {
        X = design;
    }
    const Eigen::Index k = X.cols();
    if (k == 0) {
        throw InvalidArgument("regression needs at least one regressor");
    }
    if (n < k) {
        throw InvalidArgument("regression needs at least as many observations (" + std::to_string(n) +
                              ") as coefficients (" + std::to_string(k) + ")");
    }
    if (!X.allFinite() || !response.allFinite()) {
        throw InvalidArgument("regression data contains non-finite values");
    }

    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (scale(j) == 0) {
            throw RankDeficient("regressor " + std::to_string(j) + " is identically zero");
        }
    }
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        throw RankDeficient("design matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(k));
    }
    const Eigen::VectorXd beta_scaled = qr.solve(response);
    const Eigen::VectorXd beta = beta_scaled.cwiseQuotient(scale);

    const Eigen::VectorXd resid = response - X * beta;
    const double rss = resid.squaredNorm();
    const double tss = intercept ? (response.array() - response.mean()).matrix().squaredNorm() : response.squaredNorm();
    const Eigen::Index df = n - k;
    const double sigma2 = df > 0 ? rss / double(df) : 0.0;

    // (Xs' Xs)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd P = qr.colsPermutation();
    const Eigen::MatrixXd cov_scaled = P * (Rinv * Rinv.transpose()) * P.transpose();

    OlsFit fit;
    fit.intercept = intercept;
    fit.n_obs = std::size_t(n);
    fit.coefficients.assign(beta.data(), beta.data() + k);
    fit.std_errors.resize(std::size_t(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        fit.std_errors[std::size_t(j)] = std::sqrt(std::max(sigma2 * cov_scaled(j, j), 0.0)) / scale(j);
    }
    if (tss > 0) {
        fit.r_squared = std::clamp(1 - rss / tss, 0.0, 1.0);
    }
    else {
        fit.r_squared = rss == 0 ? 1.0 : 0.0;
    }
    fit.residual_std_error = std::sqrt(sigma2);
    return fit;
}

/// Column-wise convenience overload.
inline OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& response,
                  bool intercept)
{
    const Eigen::Index n = Eigen::Index(response.size());
    Eigen::MatrixXd X(n, Eigen::Index(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (Eigen::Index(columns[j].size()) != n) {
            throw InvalidArgument("regressor " + std::to_string(j) + " has the wrong length");
        }
        X.col(Eigen::Index(j)) = Eigen::Map<const Eigen::VectorXd>(columns[j].data(), n);
    }
    return ols(X, Eigen::Map<const Eigen::VectorXd>(response.data(), n), intercept);
}

} // namespace epigrowth
