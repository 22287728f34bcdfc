#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/panel.hpp"

namespace crashlens {

enum class KurtosisMode { raw, excess };

// Sample moments of one series. skewness is Fisher-Pearson m3/m2^{3/2},
// kurtosis m4/m2^2 (raw by default); both undefined on zero-variance input.
struct DescriptiveStats {
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;  // n-1 denominator
    std::optional<double> skewness;
    std::optional<double> kurtosis;
    double min = 0.0;
    double max = 0.0;
};

inline DescriptiveStats describe_series(const std::vector<double>& x,
                                        KurtosisMode kmode = KurtosisMode::raw) {
    const std::size_t n = x.size();
    if (n < 2) throw TooFewObservations("describe needs >= 2 observations");
    DescriptiveStats s;
    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.std = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    // higher moments need 4+ observations and non-degenerate variance
    if (m2 > 1e-18 && n >= 4) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2) - (kmode == KurtosisMode::excess ? 3.0 : 0.0);
    }
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = (n % 2 == 1) ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return s;
}

inline DescriptiveStats describe(const ReturnPanel& rp, const std::string& asset,
                                 KurtosisMode kmode = KurtosisMode::raw) {
    const Eigen::Index i = rp.index_of(asset);
    std::vector<double> x(static_cast<std::size_t>(rp.n_obs()));
    for (Eigen::Index t = 0; t < rp.n_obs(); ++t)
        x[static_cast<std::size_t>(t)] = rp.returns(i, t);
    return describe_series(x, kmode);
}

inline constexpr const char* kStatsCsvHeader =
    "asset,mean,median,std,skewness,kurtosis,min,max";

inline std::string stats_csv_row(const std::string& asset, const DescriptiveStats& s) {
    const auto opt = [](const std::optional<double>& v) {
        return v ? csv::format_sig(*v) : std::string("undefined");
    };
    return csv::join_row({asset, csv::format_sig(s.mean), csv::format_sig(s.median),
                          csv::format_sig(s.std), opt(s.skewness), opt(s.kurtosis),
                          csv::format_sig(s.min), csv::format_sig(s.max)});
}

}  // namespace crashlens
