#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "crashlens/errors.hpp"

namespace crashlens {

struct LinearFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd residuals;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    long t_obs = 0;
    long k_regressors = 0;  // design columns, intercept included
};

// Least squares through a rank-revealing QR; R^2 against the intercept-only
// baseline; adjusted R^2 = 1 - (1-R^2)(T-1)/(T-k-1).
inline LinearFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const long t = static_cast<long>(x.rows());
    const long k = static_cast<long>(x.cols());
    if (y.size() != x.rows()) throw LengthMismatch("ols: X and y row counts differ");
    if (t <= k) throw TooFewObservations("ols: need T > k");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw RankDeficient("ols: design matrix is rank deficient");
    LinearFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - x * fit.coefficients;
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    const double ssr = fit.residuals.squaredNorm();
    fit.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    fit.t_obs = t;
    fit.k_regressors = k;
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(t - 1) /
                           static_cast<double>(t - k - 1);
    return fit;
}

inline constexpr int kAutoLag = -1;

inline int newey_west_auto_lag(long t_obs) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(t_obs) / 100.0,
                                                      2.0 / 9.0)));
}

struct HacCovariance {
    Eigen::MatrixXd covariance;
    Eigen::VectorXd standard_errors;
    int lag = 0;
};

// Bartlett-kernel HAC: S = G0 + sum_l (1 - l/(L+1)) (G_l + G_l'), with
// G_l = (1/T) sum_t (x_t u_t)(x_{t-l} u_{t-l})'; cov = T (X'X)^-1 S (X'X)^-1.
// Lag 0 degenerates to the White sandwich.
inline HacCovariance newey_west(const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& residuals,
                                int lag = kAutoLag) {
    const long t = static_cast<long>(x.rows());
    const long k = static_cast<long>(x.cols());
    if (residuals.size() != x.rows())
        throw LengthMismatch("newey_west: X and residual lengths differ");
    if (lag == kAutoLag) lag = newey_west_auto_lag(t);
    if (lag < 0) throw InvalidParameter("newey_west: lag must be >= 0");
    if (lag >= t) throw LagTooLarge("newey_west: lag must be < T");

    // score rows x_t * u_t
    Eigen::MatrixXd scores = x.array().colwise() * residuals.array();
    Eigen::MatrixXd s = (scores.transpose() * scores) / static_cast<double>(t);
    for (int l = 1; l <= lag; ++l) {
        Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(k, k);
        for (long ti = l; ti < t; ++ti)
            gamma += scores.row(ti).transpose() * scores.row(ti - l);
        gamma /= static_cast<double>(t);
        const double w = 1.0 - static_cast<double>(l) / static_cast<double>(lag + 1);
        s += w * (gamma + gamma.transpose());
    }
    const Eigen::MatrixXd xtx_inv =
        (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    HacCovariance out;
    out.covariance = static_cast<double>(t) * xtx_inv * s * xtx_inv;
    out.standard_errors = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    out.lag = lag;
    return out;
}

}  // namespace crashlens
