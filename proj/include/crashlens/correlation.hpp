#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashlens/errors.hpp"
#include "crashlens/panel.hpp"
#include "crashlens/weights.hpp"

namespace crashlens {

// Weighted variance below this is treated as degenerate (stablecoins with
// near-constant price produce all-zero return windows).
inline constexpr double kDegenerateVariance = 1e-18;

struct WeightedCorr {
    double rho = 0.0;
    bool degenerate = false;
};

// Exact linear dependence (Cauchy-Schwarz equality) must give exactly +/-1;
// rounding through the two square roots would otherwise lose an ulp.
inline double detail_corr_ratio(long double cxy, long double vx, long double vy) {
    if (vx == vy && cxy == vx) return 1.0;
    if (vx == vy && cxy == -vx) return -1.0;
    double rho = static_cast<double>(cxy / (std::sqrt(vx) * std::sqrt(vy)));
    if (rho > 1.0) rho = 1.0;
    if (rho < -1.0) rho = -1.0;
    return rho;
}

inline WeightedCorr weighted_corr(std::span<const double> x, std::span<const double> y,
                                  const WeightScheme& w) {
    if (x.size() != y.size() || x.size() != w.weights.size())
        throw LengthMismatch("weighted_corr inputs must share the window length");
    // extended-precision sums keep affine invariance well inside 1e-12
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t t = 0; t < x.size(); ++t) {
        mx += w.weights[t] * static_cast<long double>(x[t]);
        my += w.weights[t] * static_cast<long double>(y[t]);
    }
    long double cxy = 0.0L, vx = 0.0L, vy = 0.0L;
    // grouping as w*(dx*dy) keeps the estimate exactly symmetric in x and y
    for (std::size_t t = 0; t < x.size(); ++t) {
        const long double dx = x[t] - mx;
        const long double dy = y[t] - my;
        cxy += w.weights[t] * (dx * dy);
        vx += w.weights[t] * (dx * dx);
        vy += w.weights[t] * (dy * dy);
    }
    if (vx < kDegenerateVariance || vy < kDegenerateVariance) return {0.0, true};
    return {detail_corr_ratio(cxy, vx, vy), false};
}

// One window's exponentially weighted Pearson matrix.
struct WeightedCorrMatrix {
    std::int64_t window_end = 0;
    Eigen::MatrixXd matrix;  // symmetric, unit diagonal, entries in [-1, 1]
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> degenerate_flags;
};

inline WeightedCorrMatrix correlation_matrix(const Eigen::MatrixXd& window_returns,
                                             const WeightScheme& w,
                                             std::int64_t window_end) {
    const Eigen::Index n = window_returns.rows();
    const Eigen::Index len = window_returns.cols();
    if (len != static_cast<Eigen::Index>(w.weights.size()))
        throw LengthMismatch("window length does not match weight scheme");
    WeightedCorrMatrix out;
    out.window_end = window_end;
    out.matrix.setIdentity(n, n);
    out.degenerate_flags.setConstant(n, n, false);

    // weighted Gram matrix, accumulated in a fixed order so identical rows
    // produce bitwise-equal entries; normalising by sqrt of the diagonal gives
    // the correlation and keeps the result PSD by construction
    std::vector<long double> means(static_cast<std::size_t>(n), 0.0L);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index t = 0; t < len; ++t)
            means[static_cast<std::size_t>(i)] +=
                w.weights[static_cast<std::size_t>(t)] *
                static_cast<long double>(window_returns(i, t));
    std::vector<std::vector<long double>> centered(
        static_cast<std::size_t>(n), std::vector<long double>(static_cast<std::size_t>(len)));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index t = 0; t < len; ++t)
            centered[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                window_returns(i, t) - means[static_cast<std::size_t>(i)];
    std::vector<std::vector<long double>> gram(
        static_cast<std::size_t>(n), std::vector<long double>(static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        for (std::size_t j = i; j < static_cast<std::size_t>(n); ++j) {
            long double acc = 0.0L;
            for (std::size_t t = 0; t < static_cast<std::size_t>(len); ++t)
                acc += w.weights[t] * (centered[i][t] * centered[j][t]);
            gram[i][j] = gram[j][i] = acc;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const long double vi = gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
            const long double vj = gram[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
            double rho = 0.0;
            bool degenerate = false;
            if (vi < kDegenerateVariance || vj < kDegenerateVariance) {
                degenerate = true;
            } else {
                rho = detail_corr_ratio(
                    gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], vi, vj);
            }
            out.matrix(i, j) = out.matrix(j, i) = rho;
            out.degenerate_flags(i, j) = out.degenerate_flags(j, i) = degenerate;
        }
    }
    return out;
}

struct RollingCorrSeries {
    std::vector<std::string> assets;
    std::vector<std::int64_t> window_ends;
    std::vector<WeightedCorrMatrix> matrices;
};

// One matrix per window of `window` return observations, advancing by `step`;
// each window is labelled by its last return timestamp.
inline RollingCorrSeries rolling_corr(const ReturnPanel& rp, int window = 24,
                                      int step = 1, double theta = 0.3,
                                      ThetaMode mode = ThetaMode::fraction) {
    if (step < 1) throw InvalidParameter("step must be >= 1");
    if (rp.n_obs() < window)
        throw InsufficientData("need at least `window` return observations");
    const WeightScheme w = make_weights(window, theta, mode);
    RollingCorrSeries out;
    out.assets = rp.assets;
    for (Eigen::Index endc = window - 1; endc < rp.n_obs(); endc += step) {
        const Eigen::MatrixXd slice = rp.returns.middleCols(endc - (window - 1), window);
        const std::int64_t label = rp.timestamps[static_cast<std::size_t>(endc)];
        out.window_ends.push_back(label);
        out.matrices.push_back(correlation_matrix(slice, w, label));
    }
    return out;
}

inline constexpr const char* kMarketSentinel = "MARKET";

// Mean off-diagonal correlation: an asset against the rest of the system,
// or MARKET for the grand mean over all pairs. Degenerate pairs count as 0.
inline std::vector<double> average_corr(const RollingCorrSeries& series,
                                        const std::string& focus) {
    std::vector<double> out;
    out.reserve(series.matrices.size());
    const Eigen::Index n = series.matrices.empty() ? 0 : series.matrices[0].matrix.rows();
    Eigen::Index idx = -1;
    if (focus != kMarketSentinel) {
        const auto it = std::find(series.assets.begin(), series.assets.end(), focus);
        if (it == series.assets.end()) throw UnknownAsset("unknown asset: " + focus);
        idx = static_cast<Eigen::Index>(it - series.assets.begin());
    }
    for (const auto& m : series.matrices) {
        double sum = 0.0;
        if (idx >= 0) {
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != idx) sum += m.matrix(idx, j);
            out.push_back(n > 1 ? sum / static_cast<double>(n - 1) : 0.0);
        } else {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    if (i != j) sum += m.matrix(i, j);
            out.push_back(n > 1 ? sum / static_cast<double>(n * (n - 1)) : 0.0);
        }
    }
    return out;
}

}  // namespace crashlens
