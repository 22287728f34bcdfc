#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "crashlens/correlation.hpp"
#include "crashlens/ema.hpp"
#include "crashlens/weights.hpp"
#include "helpers.hpp"

using namespace crashlens;
using Catch::Matchers::WithinAbs;

namespace {

// textbook unweighted Pearson in long double
double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<long double>(x.size());
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double cxy = 0.0L, vx = 0.0L, vy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cxy += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(cxy / std::sqrt(vx * vy));
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    std::vector<double> out(n);
    for (auto& v : out) v = d(rng);
    return out;
}

}  // namespace

TEST_CASE("weight scheme matches the closed-form normalisation") {
    // w0 solves sum w_t = 1: sum e^{(t-dt)/theta} = (1-e^{-dt/theta})/(1-e^{-1/theta})
    for (const auto& [window, theta] : std::vector<std::pair<int, double>>{
             {24, 7.2}, {24, 0.3}, {2, 1.0}, {48, 14.4}}) {
        const auto ws = make_weights(window, theta, ThetaMode::literal);
        const double geom =
            (1.0 - std::exp(-window / theta)) / (1.0 - std::exp(-1.0 / theta));
        const double w0 = 1.0 / geom;
        for (int t = 1; t <= window; ++t)
            CHECK_THAT(ws.weights[static_cast<std::size_t>(t - 1)],
                       WithinAbs(w0 * std::exp((t - window) / theta), 1e-12));
        double sum = 0.0;
        for (double w : ws.weights) sum += w;
        CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
        for (std::size_t t = 1; t < ws.weights.size(); ++t)
            CHECK(ws.weights[t] > ws.weights[t - 1]);
    }

    // two-point window with unit decay
    const auto two = make_weights(2, 1.0, ThetaMode::literal);
    CHECK_THAT(two.weights[0], WithinAbs(0.26894, 1e-5));
    CHECK_THAT(two.weights[1], WithinAbs(0.73106, 1e-5));

    // large theta limit is uniform
    const auto flat = make_weights(24, 1e9, ThetaMode::literal);
    for (double w : flat.weights) CHECK_THAT(w, WithinAbs(1.0 / 24.0, 1e-9));

    // fraction mode scales theta by the window (0.25 * 24 = 6 exactly)
    const auto frac = make_weights(24, 0.25, ThetaMode::fraction);
    const auto lit = make_weights(24, 6.0, ThetaMode::literal);
    CHECK(frac.decay == lit.decay);
    CHECK(frac.weights == lit.weights);

    CHECK_THROWS_AS(make_weights(1, 0.3), InvalidParameter);
    CHECK_THROWS_AS(make_weights(24, 0.0), InvalidParameter);
    CHECK_THROWS_AS(make_weights(24, -1.0), InvalidParameter);
}

TEST_CASE("weighted correlation identities") {
    std::mt19937_64 rng(42);
    const auto w = make_weights(24, 0.3);
    const auto x = random_series(rng, 24);

    CHECK(weighted_corr(x, x, w).rho == 1.0);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    CHECK(weighted_corr(x, neg, w).rho == -1.0);

    // symmetry is exact
    const auto y = random_series(rng, 24);
    CHECK(weighted_corr(x, y, w).rho == weighted_corr(y, x, w).rho);

    // degenerate variance flags and zeroes
    const std::vector<double> constant(24, 0.0);
    const auto deg = weighted_corr(x, constant, w);
    CHECK(deg.degenerate);
    CHECK(deg.rho == 0.0);

    std::vector<double> short_x(10, 1.0);
    CHECK_THROWS_AS(weighted_corr(short_x, x, w), LengthMismatch);
}

TEST_CASE("uniform weights reduce to unweighted Pearson") {
    std::mt19937_64 rng(1234);
    auto w = make_weights(50, 1.0);
    w.weights.assign(50, 1.0 / 50.0);  // exactly uniform
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = random_series(rng, 50);
        auto y = random_series(rng, 50);
        // mix in some correlation
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
        const auto got = weighted_corr(x, y, w);
        CHECK(!got.degenerate);
        CHECK_THAT(got.rho, WithinAbs(pearson(x, y), 1e-12));
    }
}

TEST_CASE("weighted correlation affine invariance") {
    std::mt19937_64 rng(777);
    const auto w = make_weights(24, 0.3);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = random_series(rng, 24);
        const auto y = random_series(rng, 24);
        const double base = weighted_corr(x, y, w).rho;
        // forming a*x+b in double already rounds the inputs; extreme |a| with a
        // large offset loses more than 1e-12 before the estimator runs
        for (const double a : {2.5, -3.0, 0.01}) {
            std::vector<double> ax(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i] + 0.7;
            const double got = weighted_corr(ax, y, w).rho;
            CHECK_THAT(got, WithinAbs((a > 0 ? base : -base), 1e-12));
        }
    }
}

TEST_CASE("rolling correlation window count and labels") {
    const auto panel = testutil::make_panel(3, 26, 5, false);
    const auto rp = log_returns(panel);  // 25 return observations
    const auto series = rolling_corr(rp, 24, 1);
    CHECK(series.matrices.size() == 2);
    CHECK(series.window_ends[0] == rp.timestamps[23]);
    CHECK(series.window_ends[1] == rp.timestamps[24]);

    CHECK_THROWS_AS(rolling_corr(log_returns(testutil::make_panel(3, 20, 5)), 24, 1),
                    InsufficientData);

    // identical assets: off-diagonal entries are 1
    ReturnPanel same;
    same.assets = {"A", "B", "C"};
    same.returns.resize(3, 30);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> d(0.0, 0.01);
    for (int t = 0; t < 30; ++t) {
        const double v = d(rng);
        for (int i = 0; i < 3; ++i) same.returns(i, t) = v;
        same.timestamps.push_back(testutil::kFixtureStart + (t + 1) * 3600);
    }
    const auto s2 = rolling_corr(same, 24, 1);
    for (const auto& m : s2.matrices) {
        CHECK(m.matrix(0, 1) == 1.0);
        CHECK(m.matrix(1, 2) == 1.0);
        CHECK(m.matrix(0, 2) == 1.0);
    }
}

TEST_CASE("rolling matrices are symmetric unit-diagonal PSD") {
    const auto panel = testutil::make_panel(5, 201, 31, false);
    const auto rp = log_returns(panel);
    const auto series = rolling_corr(rp, 24, 1);
    REQUIRE(series.matrices.size() == 200 - 23);
    for (const auto& m : series.matrices) {
        CHECK((m.matrix.array() == m.matrix.transpose().array()).all());
        for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) CHECK(m.matrix(i, i) == 1.0);
        CHECK(m.matrix.minCoeff() >= -1.0);
        CHECK(m.matrix.maxCoeff() <= 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.matrix);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("degenerate stablecoin rows stay in the matrix") {
    const auto panel = testutil::make_panel(4, 60, 17);  // UST constant
    const auto rp = log_returns(panel);
    const auto series = rolling_corr(rp, 24, 1);
    for (const auto& m : series.matrices) {
        CHECK(m.degenerate_flags(0, 1));  // LUNA-UST pair
        CHECK(m.matrix(0, 1) == 0.0);
        CHECK(m.matrix(1, 1) == 1.0);
        CHECK(!m.degenerate_flags(0, 2));
    }
}

TEST_CASE("average correlation against brute force") {
    const auto panel = testutil::make_panel(6, 80, 23, false);
    const auto rp = log_returns(panel);
    const auto series = rolling_corr(rp, 24, 1);

    const auto market = average_corr(series, kMarketSentinel);
    const auto luna = average_corr(series, "LUNA");
    REQUIRE(market.size() == series.matrices.size());
    for (std::size_t w = 0; w < series.matrices.size(); ++w) {
        const auto& m = series.matrices[w].matrix;
        const auto n = m.rows();
        long double sum = 0.0L;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j) sum += m(i, j);
        CHECK_THAT(market[w],
                   WithinAbs(static_cast<double>(sum / (n * (n - 1))), 1e-12));
        long double row = 0.0L;
        for (Eigen::Index j = 1; j < n; ++j) row += m(0, j);
        CHECK_THAT(luna[w], WithinAbs(static_cast<double>(row / (n - 1)), 1e-12));
    }

    // two assets: the asset average is the single pairwise value
    const auto p2 = testutil::make_panel(2, 40, 29, false);
    const auto s2 = rolling_corr(log_returns(p2), 24, 1);
    const auto a = average_corr(s2, "LUNA");
    for (std::size_t w = 0; w < s2.matrices.size(); ++w)
        CHECK(a[w] == s2.matrices[w].matrix(0, 1));

    CHECK_THROWS_AS(average_corr(series, "NOPE"), UnknownAsset);
}

TEST_CASE("ema recurrence and bounds") {
    CHECK(ema({0.0, 1.0}, 0.3) == std::vector<double>{0.0, 0.3});

    const std::vector<double> constant(10, 3.5);
    CHECK(ema(constant, 0.3) == constant);

    std::mt19937_64 rng(71);
    const auto x = random_series(rng, 200);
    CHECK(ema(x, 1.0) == x);

    const auto s = ema(x, 0.3);
    const double lo = *std::min_element(x.begin(), x.end());
    const double hi = *std::max_element(x.begin(), x.end());
    for (double v : s) {
        CHECK(v >= lo);
        CHECK(v <= hi);
    }

    CHECK(ema({}, 0.5).empty());
    CHECK_THROWS_AS(ema(x, 0.0), InvalidParameter);
    CHECK_THROWS_AS(ema(x, 1.5), InvalidParameter);
}
