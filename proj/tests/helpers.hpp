#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "crashlens/panel.hpp"
#include "crashlens/store.hpp"
#include "crashlens/time.hpp"
#include "crashlens/trade.hpp"

namespace testutil {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path() / ("crashlens_" + tag);
        std::filesystem::remove_all(base);
        std::filesystem::create_directories(base);
        path_ = base;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline constexpr std::int64_t kFixtureStart = crashlens::utc_epoch(2022, 5, 1);

// Geometric random walk panel; asset 1 pinned near 1.0 to mimic a stablecoin,
// asset 0 given a persistent downward drift.
inline crashlens::PricePanel make_panel(int n_assets, int n_hours, std::uint64_t seed,
                                        bool with_stablecoin = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.02);
    crashlens::PricePanel p;
    for (int i = 0; i < n_assets; ++i) {
        if (i == 0) p.assets.push_back("LUNA");
        else if (i == 1) p.assets.push_back(with_stablecoin ? "UST" : "ETH");
        else if (i == 2) p.assets.push_back("BTC");
        else p.assets.push_back("ALT" + std::to_string(i));
    }
    p.close.resize(n_assets, n_hours);
    p.fill_flags.setConstant(n_assets, n_hours, false);
    for (int t = 0; t < n_hours; ++t)
        p.timestamps.push_back(kFixtureStart + t * crashlens::kSecondsPerHour);
    for (int i = 0; i < n_assets; ++i) {
        double level = 10.0 + 5.0 * i;
        if (i == 1 && with_stablecoin) level = 1.0;
        for (int t = 0; t < n_hours; ++t) {
            p.close(i, t) = level;
            double drift = 0.0;
            if (i == 0) drift = -0.003;
            const double shock = (i == 1 && with_stablecoin) ? 0.0 : noise(rng);
            level *= std::exp(drift + shock);
        }
    }
    return p;
}

inline std::vector<crashlens::TradeRecord> make_tape(int n_trades, std::uint64_t seed,
                                                     std::int64_t start_ms,
                                                     std::int64_t span_ms) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> price(50.0, 150.0);
    std::uniform_real_distribution<double> qty(0.01, 4.0);
    std::uniform_int_distribution<std::int64_t> dt(1, span_ms / std::max(1, n_trades) * 2);
    std::bernoulli_distribution buy(0.5);
    std::vector<crashlens::TradeRecord> tape;
    std::int64_t ts = start_ms;
    for (int i = 0; i < n_trades; ++i) {
        crashlens::TradeRecord t;
        t.ts_ms = ts;
        t.price = price(rng);
        t.amount = qty(rng);
        t.side = buy(rng) ? crashlens::Side::buy : crashlens::Side::sell;
        t.trade_id = std::to_string(i + 1);
        tape.push_back(std::move(t));
        ts += dt(rng);
    }
    return tape;
}

// Store fixture backing the pipeline tests: candles for every panel asset,
// trades for the three focus symbols.
inline void build_store_fixture(const std::filesystem::path& store_dir, int n_assets,
                                int n_hours, std::uint64_t seed,
                                const std::string& exchange = "kraken") {
    using namespace crashlens;
    DataStore store{store_dir};
    const PricePanel p = make_panel(n_assets, n_hours, seed);
    const std::int64_t start = p.timestamps.front();
    const std::int64_t end = p.timestamps.back() + kSecondsPerHour;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> jitter(0.0, 0.001);
    for (int i = 0; i < n_assets; ++i) {
        std::vector<Candle> candles;
        for (int t = 0; t < n_hours; ++t) {
            const double close = p.close(i, t);
            const double open = t == 0 ? close : p.close(i, t - 1);
            Candle c;
            c.ts = p.timestamps[static_cast<std::size_t>(t)];
            c.open = open;
            c.close = close;
            c.high = std::max(open, close) * (1.0 + std::abs(jitter(rng)));
            c.low = std::min(open, close) * (1.0 - std::abs(jitter(rng)));
            c.volume = 100.0 + 10.0 * i + t % 7;
            candles.push_back(c);
        }
        store.put_candles(exchange, p.assets[static_cast<std::size_t>(i)], candles,
                          {start, end});
    }
    int k = 0;
    for (const std::string sym : {"LUNA", "UST", "BTC"}) {
        auto tape = make_tape(n_hours * 6, seed + 17 * (++k), start * 1000,
                              (end - start) * 1000);
        for (auto& t : tape)
            if (t.ts_ms >= end * 1000) t.ts_ms = end * 1000 - 1;
        std::sort(tape.begin(), tape.end(), [](const auto& a, const auto& b) {
            return a.ts_ms != b.ts_ms ? a.ts_ms < b.ts_ms : a.trade_id < b.trade_id;
        });
        store.put_trades(exchange, sym, tape, {start, end});
    }
}

}  // namespace testutil
