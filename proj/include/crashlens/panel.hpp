#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/time.hpp"

namespace crashlens {

// Aligned hourly close grid: one row per asset, one column per hour.
struct PricePanel {
    std::vector<std::int64_t> timestamps;            // length T, spaced 3600 s
    std::vector<std::string> assets;                 // length N
    Eigen::MatrixXd close;                           // N x T, all > 0
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> fill_flags;  // N x T

    Eigen::Index n_assets() const { return close.rows(); }
    Eigen::Index n_hours() const { return close.cols(); }

    void check() const {
        if (close.rows() < 1 || close.cols() < 2)
            throw InvalidParameter("panel needs N >= 1 and T >= 2");
        if (static_cast<Eigen::Index>(timestamps.size()) != close.cols() ||
            static_cast<Eigen::Index>(assets.size()) != close.rows())
            throw LengthMismatch("panel dimensions disagree");
        for (std::size_t t = 1; t < timestamps.size(); ++t)
            if (timestamps[t] - timestamps[t - 1] != kSecondsPerHour)
                throw InvalidParameter("panel timestamps not hourly");
        if ((close.array() <= 0.0).any())
            throw NonPositivePrice("panel contains non-positive close");
    }

    Eigen::Index index_of(const std::string& asset) const {
        const auto it = std::find(assets.begin(), assets.end(), asset);
        if (it == assets.end()) throw UnknownAsset("unknown asset: " + asset);
        return static_cast<Eigen::Index>(it - assets.begin());
    }
};

// Log-return grid; column t is labelled by the later hour's timestamp.
struct ReturnPanel {
    std::vector<std::int64_t> timestamps;  // length T-1
    std::vector<std::string> assets;
    Eigen::MatrixXd returns;               // N x (T-1)

    Eigen::Index n_assets() const { return returns.rows(); }
    Eigen::Index n_obs() const { return returns.cols(); }

    Eigen::Index index_of(const std::string& asset) const {
        const auto it = std::find(assets.begin(), assets.end(), asset);
        if (it == assets.end()) throw UnknownAsset("unknown asset: " + asset);
        return static_cast<Eigen::Index>(it - assets.begin());
    }
};

struct MarketReturnSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;  // equally weighted cross-asset mean per hour
};

// r_{i,t} = ln p_{i,t} - ln p_{i,t-1}
inline ReturnPanel log_returns(const PricePanel& panel) {
    panel.check();
    const Eigen::Index n = panel.n_assets();
    const Eigen::Index t = panel.n_hours();
    ReturnPanel rp;
    rp.assets = panel.assets;
    rp.timestamps.assign(panel.timestamps.begin() + 1, panel.timestamps.end());
    rp.returns.resize(n, t - 1);
    const Eigen::MatrixXd logp = panel.close.array().log().matrix();
    rp.returns = logp.rightCols(t - 1) - logp.leftCols(t - 1);
    return rp;
}

// Each asset's series divided by its first observation; first column all ones.
inline Eigen::MatrixXd rescale(const PricePanel& panel) {
    panel.check();
    Eigen::MatrixXd out = panel.close;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) /= panel.close(i, 0);
    return out;
}

inline MarketReturnSeries market_return(const ReturnPanel& rp) {
    if (rp.n_assets() < 1) throw InvalidParameter("market_return needs N >= 1");
    MarketReturnSeries m;
    m.timestamps = rp.timestamps;
    m.values.resize(static_cast<std::size_t>(rp.n_obs()));
    for (Eigen::Index t = 0; t < rp.n_obs(); ++t) {
        const auto col = rp.returns.col(t);
        // a unanimous hour averages to the common value without rounding
        if ((col.array() == col(0)).all()) {
            m.values[static_cast<std::size_t>(t)] = col(0);
        } else {
            m.values[static_cast<std::size_t>(t)] = col.mean();
        }
    }
    return m;
}

// Per-asset arithmetic mean of returns with timestamps in the closed interval.
inline std::map<std::string, double> average_returns(const ReturnPanel& rp,
                                                     std::int64_t start,
                                                     std::int64_t end) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index t = 0; t < rp.n_obs(); ++t) {
        const std::int64_t ts = rp.timestamps[static_cast<std::size_t>(t)];
        if (ts >= start && ts <= end) cols.push_back(t);
    }
    if (cols.empty()) throw EmptyWindow("no return observations in window");
    std::map<std::string, double> out;
    for (Eigen::Index i = 0; i < rp.n_assets(); ++i) {
        double sum = 0.0;
        for (const Eigen::Index c : cols) sum += rp.returns(i, c);
        out[rp.assets[static_cast<std::size_t>(i)]] = sum / static_cast<double>(cols.size());
    }
    return out;
}

// Drop the listed assets; market return and CSAD downstream see the reduced set.
inline ReturnPanel exclude_assets(const ReturnPanel& rp,
                                  const std::vector<std::string>& tickers) {
    for (const auto& t : tickers) (void)rp.index_of(t);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < rp.n_assets(); ++i) {
        const std::string& a = rp.assets[static_cast<std::size_t>(i)];
        if (std::find(tickers.begin(), tickers.end(), a) == tickers.end()) keep.push_back(i);
    }
    if (keep.size() < 2) throw TooFewAssetsRemain("fewer than 2 assets would remain");
    ReturnPanel out;
    out.timestamps = rp.timestamps;
    out.returns.resize(static_cast<Eigen::Index>(keep.size()), rp.n_obs());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.assets.push_back(rp.assets[static_cast<std::size_t>(keep[k])]);
        out.returns.row(static_cast<Eigen::Index>(k)) = rp.returns.row(keep[k]);
    }
    return out;
}

// Wide close-price CSV: header `ts,SYM1,SYM2,...`, one row per hour.
inline std::string panel_to_csv(const PricePanel& panel) {
    std::vector<std::string> head{"ts"};
    head.insert(head.end(), panel.assets.begin(), panel.assets.end());
    std::string out = csv::join_row(head);
    for (Eigen::Index t = 0; t < panel.n_hours(); ++t) {
        std::vector<std::string> row{csv::format_int(panel.timestamps[static_cast<std::size_t>(t)])};
        for (Eigen::Index i = 0; i < panel.n_assets(); ++i)
            row.push_back(csv::format_double(panel.close(i, t)));
        out += csv::join_row(row);
    }
    return out;
}

inline PricePanel panel_from_csv_file(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.size() < 3 || rows[0].size() < 2 || rows[0][0] != "ts")
        throw ParseError("bad panel CSV: " + path);
    PricePanel p;
    p.assets.assign(rows[0].begin() + 1, rows[0].end());
    const auto n = static_cast<Eigen::Index>(p.assets.size());
    const auto t = static_cast<Eigen::Index>(rows.size() - 1);
    p.close.resize(n, t);
    p.fill_flags.setConstant(n, t, false);
    for (Eigen::Index col = 0; col < t; ++col) {
        const auto& r = rows[static_cast<std::size_t>(col) + 1];
        if (r.size() != p.assets.size() + 1) throw ParseError("ragged panel CSV row");
        p.timestamps.push_back(csv::parse_int(r[0]));
        for (Eigen::Index i = 0; i < n; ++i)
            p.close(i, col) = csv::parse_double(r[static_cast<std::size_t>(i) + 1]);
    }
    p.check();
    return p;
}

}  // namespace crashlens
