#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crashlens/correlation.hpp"
#include "crashlens/ema.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/tmfg.hpp"

namespace crashlens {

struct CentralityVector {
    std::int64_t window_end = 0;
    std::vector<double> values;  // nonnegative, unit L2 norm
    double eigenvalue = 0.0;
    int iterations = 0;
};

// Dominant eigenvector of the |weight| adjacency by power iteration:
// uniform start, 1e-10 L2 change tolerance, 10 000 iteration cap.
inline CentralityVector eigenvector_centrality(const TmfgGraph& g,
                                               bool weighted = true,
                                               double tol = 1e-10,
                                               int max_iter = 10000) {
    const Eigen::MatrixXd a = weighted
                                  ? g.weighted_adjacency(true)
                                  : (g.weighted_adjacency(true).array() > 0.0)
                                        .cast<double>()
                                        .matrix();
    const Eigen::Index n = a.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    CentralityVector out;
    out.window_end = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::VectorXd next = a * v;
        const double norm = next.norm();
        if (norm == 0.0) {
            if (a.isZero(0.0)) {
                // zero matrix: every unit vector is dominant; keep the uniform start
                out.values.assign(v.data(), v.data() + n);
                out.eigenvalue = 0.0;
                out.iterations = it;
                return out;
            }
            throw NoConvergence("power iteration collapsed to the zero vector");
        }
        next /= norm;
        const double delta = (next - v).norm();
        v = next;
        if (delta <= tol) break;
    }
    if (it >= max_iter)
        throw NoConvergence("power iteration did not converge within the cap");
    v = v.cwiseAbs();  // Perron vector of a nonnegative matrix
    v.normalize();
    out.values.assign(v.data(), v.data() + n);
    out.eigenvalue = v.dot(a * v);
    out.iterations = it + 1;
    return out;
}

// {1,5,25,75,95,99} percentile levels of the non-focus assets per window.
struct PercentileBands {
    std::vector<int> levels;
    std::vector<std::int64_t> window_ends;
    std::vector<std::vector<double>> values;  // [window][level]
};

inline constexpr std::array<int, 6> kBandLevels{1, 5, 25, 75, 95, 99};

// Linear interpolation between closest ranks.
inline double percentile(std::vector<double> sorted_values, double level) {
    if (sorted_values.empty()) throw InvalidParameter("percentile of empty set");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double rank = level / 100.0 * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted_values[n - 1];
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

struct CentralitySeries {
    std::vector<std::string> focus;
    std::vector<std::int64_t> window_ends;
    std::vector<CentralityVector> vectors;                 // one per window, all assets
    std::map<std::string, std::vector<double>> raw;        // focus asset -> series
    std::map<std::string, std::vector<double>> smoothed;   // EMA(alpha) of raw
    PercentileBands bands;                                 // over non-focus assets
};

// Per window: TMFG on the similarity matrix, eigenvector centrality, EMA-smoothed
// focus trajectories and percentile bands over the complement.
inline CentralitySeries centrality_series(const RollingCorrSeries& rolling,
                                          const std::vector<std::string>& focus,
                                          double alpha = 0.3,
                                          bool weighted = true) {
    if (rolling.matrices.empty()) throw InsufficientData("empty rolling series");
    CentralitySeries out;
    out.focus = focus;
    out.window_ends = rolling.window_ends;
    out.bands.levels.assign(kBandLevels.begin(), kBandLevels.end());
    out.bands.window_ends = rolling.window_ends;

    std::vector<Eigen::Index> focus_idx;
    for (const auto& f : focus) {
        const auto it = std::find(rolling.assets.begin(), rolling.assets.end(), f);
        if (it == rolling.assets.end()) throw UnknownAsset("unknown asset: " + f);
        focus_idx.push_back(static_cast<Eigen::Index>(it - rolling.assets.begin()));
    }

    for (std::size_t w = 0; w < rolling.matrices.size(); ++w) {
        TmfgGraph g = build_tmfg(rolling.matrices[w].matrix);
        CentralityVector cv = eigenvector_centrality(g, weighted);
        cv.window_end = rolling.window_ends[w];

        for (std::size_t k = 0; k < focus.size(); ++k)
            out.raw[focus[k]].push_back(cv.values[static_cast<std::size_t>(focus_idx[k])]);

        std::vector<double> rest;
        for (std::size_t i = 0; i < cv.values.size(); ++i) {
            const bool is_focus =
                std::find(focus_idx.begin(), focus_idx.end(),
                          static_cast<Eigen::Index>(i)) != focus_idx.end();
            if (!is_focus) rest.push_back(cv.values[i]);
        }
        std::vector<double> levels_row;
        if (!rest.empty()) {
            std::sort(rest.begin(), rest.end());
            for (int lvl : kBandLevels) levels_row.push_back(percentile(rest, lvl));
        }
        out.bands.values.push_back(std::move(levels_row));
        out.vectors.push_back(std::move(cv));
    }
    for (const auto& f : focus) out.smoothed[f] = ema(out.raw[f], alpha);
    return out;
}

}  // namespace crashlens
