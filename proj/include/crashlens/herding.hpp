#pragma once

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/ols.hpp"
#include "crashlens/panel.hpp"

namespace crashlens {

struct CsadSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;  // nonnegative
};

// CSAD_t = (1/N) sum_i |r_{i,t} - r_{m,t}|
inline CsadSeries csad(const ReturnPanel& rp, const MarketReturnSeries& m) {
    if (rp.n_obs() != static_cast<Eigen::Index>(m.values.size()))
        throw LengthMismatch("csad: panel and market series lengths differ");
    if (rp.n_assets() < 2) throw InvalidParameter("csad needs N >= 2");
    CsadSeries out;
    out.timestamps = m.timestamps;
    out.values.resize(m.values.size());
    for (Eigen::Index t = 0; t < rp.n_obs(); ++t) {
        double v;
        if (rp.n_assets() == 2) {
            // both deviations equal |r1 - r2| / 2; computing it directly keeps
            // the two-asset identity exact
            v = std::abs(rp.returns(0, t) - rp.returns(1, t)) / 2.0;
        } else {
            double sum = 0.0;
            for (Eigen::Index i = 0; i < rp.n_assets(); ++i)
                sum += std::abs(rp.returns(i, t) - m.values[static_cast<std::size_t>(t)]);
            v = sum / static_cast<double>(rp.n_assets());
        }
        out.values[static_cast<std::size_t>(t)] = v;
    }
    return out;
}

enum class RegressionForm { symmetric, asymmetric };

inline const char* to_string(RegressionForm f) {
    return f == RegressionForm::symmetric ? "symmetric" : "asymmetric";
}

// Symmetric design [1, |r_m|, r_m^2]; asymmetric splits both terms with the
// down-market dummy D = 1{r_m < 0} (zero returns sit on the non-negative branch).
inline Eigen::MatrixXd herding_design(const std::vector<double>& market,
                                      RegressionForm form) {
    const auto t = static_cast<Eigen::Index>(market.size());
    Eigen::MatrixXd x(t, form == RegressionForm::symmetric ? 3 : 5);
    for (Eigen::Index i = 0; i < t; ++i) {
        const double rm = market[static_cast<std::size_t>(i)];
        const double a = std::abs(rm);
        const double q = rm * rm;
        if (form == RegressionForm::symmetric) {
            x(i, 0) = 1.0;
            x(i, 1) = a;
            x(i, 2) = q;
        } else {
            const double d = rm < 0.0 ? 1.0 : 0.0;
            x(i, 0) = 1.0;
            x(i, 1) = (1.0 - d) * a;
            x(i, 2) = d * a;
            x(i, 3) = (1.0 - d) * q;
            x(i, 4) = d * q;
        }
    }
    return x;
}

inline std::vector<std::string> herding_coef_names(RegressionForm form) {
    if (form == RegressionForm::symmetric) return {"alpha", "|r_m|", "r_m^2"};
    return {"alpha", "(1-D)|r_m|", "D|r_m|", "(1-D)r_m^2", "D r_m^2"};
}

inline std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

struct CoefficientResult {
    std::string name;
    double estimate = 0.0;
    double nw_se = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    std::string stars;

    bool significantly_negative(double level = 0.05) const {
        return estimate < 0.0 && p_value < level;
    }
};

struct HerdingRegressionResult {
    RegressionForm form = RegressionForm::symmetric;
    std::vector<CoefficientResult> coefficients;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    int hac_lag = 0;
    long t_obs = 0;
    long k_regressors = 0;

    // herding shows up as a significantly negative coefficient on the squared
    // market-return term(s)
    bool herding_detected(double level = 0.05) const {
        if (form == RegressionForm::symmetric)
            return coefficients[2].significantly_negative(level);
        return coefficients[3].significantly_negative(level) ||
               coefficients[4].significantly_negative(level);
    }

    std::string verdict() const {
        if (form == RegressionForm::symmetric)
            return coefficients[2].significantly_negative()
                       ? "herding: beta2 significantly negative"
                       : "no herding: beta2 not significantly negative";
        const bool up = coefficients[3].significantly_negative();
        const bool down = coefficients[4].significantly_negative();
        if (up && down) return "herding: beta3 and beta4 significantly negative";
        if (up) return "herding in up-market: beta3 significantly negative";
        if (down) return "herding in down-market: beta4 significantly negative";
        return "no herding: beta3/beta4 not significantly negative";
    }
};

inline HerdingRegressionResult run_herding(const CsadSeries& cs,
                                           const MarketReturnSeries& m,
                                           RegressionForm form,
                                           int lag = kAutoLag) {
    if (cs.values.size() != m.values.size())
        throw LengthMismatch("run_herding: CSAD and market lengths differ");
    const Eigen::MatrixXd x = herding_design(m.values, form);
    Eigen::Map<const Eigen::VectorXd> y(cs.values.data(),
                                        static_cast<Eigen::Index>(cs.values.size()));
    const LinearFit fit = ols(x, y);
    const HacCovariance hac = newey_west(x, fit.residuals, lag);

    HerdingRegressionResult res;
    res.form = form;
    res.r2 = fit.r2;
    res.adj_r2 = fit.adj_r2;
    res.hac_lag = hac.lag;
    res.t_obs = fit.t_obs;
    res.k_regressors = fit.k_regressors;
    const auto names = herding_coef_names(form);
    const boost::math::students_t dist(
        static_cast<double>(fit.t_obs - fit.k_regressors));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        CoefficientResult c;
        c.name = names[static_cast<std::size_t>(j)];
        c.estimate = fit.coefficients(j);
        c.nw_se = hac.standard_errors(j);
        c.t_stat = c.nw_se > 0.0 ? c.estimate / c.nw_se : 0.0;
        c.p_value = c.nw_se > 0.0
                        ? 2.0 * boost::math::cdf(dist, -std::abs(c.t_stat))
                        : 1.0;
        c.stars = significance_stars(c.p_value);
        res.coefficients.push_back(std::move(c));
    }
    return res;
}

struct RollingHerdingWindow {
    std::int64_t window_end = 0;
    HerdingRegressionResult result;
};

// Asymmetric-form regressions over rolling windows (default 7 days of hours).
inline std::vector<RollingHerdingWindow> rolling_herding(const CsadSeries& cs,
                                                         const MarketReturnSeries& m,
                                                         int window = 168, int step = 1,
                                                         int lag = kAutoLag) {
    if (cs.values.size() != m.values.size())
        throw LengthMismatch("rolling_herding: CSAD and market lengths differ");
    const auto t = static_cast<long>(cs.values.size());
    if (t < window) throw InsufficientData("rolling_herding: T < window");
    std::vector<RollingHerdingWindow> out;
    for (long end = window - 1; end < t; end += step) {
        CsadSeries wc;
        MarketReturnSeries wm;
        const auto first = static_cast<std::size_t>(end - (window - 1));
        const auto last = static_cast<std::size_t>(end + 1);
        wc.timestamps.assign(cs.timestamps.begin() + static_cast<std::ptrdiff_t>(first),
                             cs.timestamps.begin() + static_cast<std::ptrdiff_t>(last));
        wc.values.assign(cs.values.begin() + static_cast<std::ptrdiff_t>(first),
                         cs.values.begin() + static_cast<std::ptrdiff_t>(last));
        wm.timestamps = wc.timestamps;
        wm.values.assign(m.values.begin() + static_cast<std::ptrdiff_t>(first),
                         m.values.begin() + static_cast<std::ptrdiff_t>(last));
        RollingHerdingWindow rw;
        rw.window_end = cs.timestamps[static_cast<std::size_t>(end)];
        rw.result = run_herding(wc, wm, RegressionForm::asymmetric, lag);
        out.push_back(std::move(rw));
    }
    return out;
}

inline constexpr const char* kHerdingCsvHeader = "form,coef_name,estimate,nw_se,t,p,stars";

inline std::string herding_result_csv(const std::vector<HerdingRegressionResult>& results) {
    std::string out = std::string(kHerdingCsvHeader) + "\n";
    for (const auto& r : results) {
        for (const auto& c : r.coefficients) {
            out += csv::join_row({to_string(r.form), c.name, csv::format_sig(c.estimate),
                                  csv::format_sig(c.nw_se), csv::format_sig(c.t_stat),
                                  csv::format_sig(c.p_value), c.stars});
        }
        out += csv::join_row({to_string(r.form), "R2", csv::format_sig(r.r2), "", "", "", ""});
        out += csv::join_row(
            {to_string(r.form), "adj_R2", csv::format_sig(r.adj_r2), "", "", "", ""});
        out += csv::join_row(
            {to_string(r.form), "hac_lag", csv::format_int(r.hac_lag), "", "", "", ""});
        out += csv::join_row({to_string(r.form), "T", csv::format_int(r.t_obs), "", "", "", ""});
    }
    return out;
}

}  // namespace crashlens
