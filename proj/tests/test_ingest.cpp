#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <chrono>
#include <nlohmann/json.hpp>
#include <thread>

#include "crashlens/exchange.hpp"
#include "crashlens/pipeline.hpp"
#include "crashlens/ratelimit.hpp"
#include "crashlens/store.hpp"
#include "helpers.hpp"

using namespace crashlens;
using nlohmann::json;

namespace {

constexpr std::int64_t kStart = testutil::kFixtureStart;  // 2022-05-01T00:00Z

RetryPolicy fast_retry() {
    RetryPolicy r;
    r.max_attempts = 4;
    r.base_delay = std::chrono::milliseconds(2);
    r.max_delay = std::chrono::milliseconds(10);
    return r;
}

// localhost replay server speaking the two exchanges' wire formats
class FixtureServer {
public:
    FixtureServer() {
        port_ = srv_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
    }

    ~FixtureServer() {
        srv_.stop();
        if (thread_.joinable()) thread_.join();
    }

    void start() {
        thread_ = std::thread([this] { srv_.listen_after_bind(); });
        srv_.wait_until_ready();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    httplib::Server& raw() { return srv_; }

    int hits() const { return hits_.load(); }

    void count_hit() { ++hits_; }

private:
    httplib::Server srv_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
};

std::string kraken_ohlc_body(std::int64_t first_ts, int count) {
    json rows = json::array();
    for (int i = 0; i < count; ++i) {
        const std::int64_t ts = first_ts + i * 3600;
        rows.push_back({ts, "100.0", "101.0", "99.0", "100.5", "100.2", "12.5", 42});
    }
    return json{{"error", json::array()},
                {"result", {{"XXBTZUSD", rows}, {"last", std::to_string(first_ts)}}}}
        .dump();
}

json kraken_trade_row(double price, double vol, double time_sec, const char* side,
                      std::int64_t id) {
    return json::array({std::to_string(price), std::to_string(vol), time_sec, side, "l",
                        "", id});
}

}  // namespace

TEST_CASE("token bucket enforces the request rate") {
    TokenBucket bucket(100.0, 1.0);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 11; ++i) bucket.acquire();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(elapsed >= 0.08);  // 10 refills at 100/s
    CHECK(elapsed < 2.0);
}

TEST_CASE("kraken candles come back ascending and filtered") {
    FixtureServer fx;
    fx.raw().Get("/0/public/OHLC", [&](const httplib::Request& req, httplib::Response& res) {
        fx.count_hit();
        CHECK(req.get_param_value("pair") == "XBTUSD");
        CHECK(req.get_param_value("interval") == "60");
        res.set_content(kraken_ohlc_body(kStart, 8), "application/json");
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    const auto candles = kraken.fetch_candles("BTC", kStart, kStart + 5 * 3600);
    REQUIRE(candles.size() == 5);
    for (std::size_t i = 1; i < candles.size(); ++i)
        CHECK(candles[i].ts == candles[i - 1].ts + 3600);
    CHECK(candles[0].open == 100.0);
    CHECK(candles[0].volume == 12.5);

    // empty half-open range: no request, no candles
    const int hits_before = fx.hits();
    CHECK(kraken.fetch_candles("BTC", kStart, kStart).empty());
    CHECK(fx.hits() == hits_before);
}

TEST_CASE("kraken rebuilds old candles from the trade tape") {
    FixtureServer fx;
    // OHLC history only reaches back to hour 4 of the requested range
    fx.raw().Get("/0/public/OHLC", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(kraken_ohlc_body(kStart + 4 * 3600, 4), "application/json");
    });
    fx.raw().Get("/0/public/Trades", [&](const httplib::Request& req, httplib::Response& res) {
        const auto since = req.get_param_value("since");
        json rows = json::array();
        if (since == std::to_string(kStart) + "000000000") {
            // two trades in hour 0, one in hour 1
            rows.push_back(kraken_trade_row(95.0, 1.0, static_cast<double>(kStart) + 10.0, "b", 1));
            rows.push_back(kraken_trade_row(97.0, 2.0, static_cast<double>(kStart) + 20.0, "s", 2));
            rows.push_back(kraken_trade_row(96.0, 1.5, static_cast<double>(kStart) + 3700.0, "b", 3));
            res.set_content(json{{"error", json::array()},
                                 {"result",
                                  {{"XXBTZUSD", rows},
                                   {"last", std::to_string((kStart + 3700) * 1000000000LL)}}}}
                                .dump(),
                            "application/json");
        } else {
            res.set_content(json{{"error", json::array()},
                                 {"result", {{"XXBTZUSD", rows}, {"last", since}}}}
                                .dump(),
                            "application/json");
        }
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    const auto candles = kraken.fetch_candles("BTC", kStart, kStart + 8 * 3600);
    REQUIRE(candles.size() == 6);  // 2 rebuilt + 4 native
    CHECK(candles[0].ts == kStart);
    CHECK(candles[0].open == 95.0);
    CHECK(candles[0].close == 97.0);
    CHECK(candles[0].volume == 3.0);
    CHECK(candles[1].ts == kStart + 3600);
    CHECK(candles[2].ts == kStart + 4 * 3600);
    CHECK(candles[2].open == 100.0);
}

TEST_CASE("kraken trades paginate by the since cursor") {
    FixtureServer fx;
    // three pages of two trades each, then repeats of the final cursor
    fx.raw().Get("/0/public/Trades", [&](const httplib::Request& req, httplib::Response& res) {
        fx.count_hit();
        const std::int64_t since_ns = std::stoll(req.get_param_value("since"));
        const std::int64_t since_ms = since_ns / 1000000;
        json rows = json::array();
        std::int64_t last_ms = since_ms;
        int emitted = 0;
        for (std::int64_t ms = kStart * 1000; ms < (kStart + 6) * 1000 && emitted < 2;
             ms += 1000) {
            if (ms < since_ms) continue;
            const int idx = static_cast<int>((ms - kStart * 1000) / 1000);
            rows.push_back(kraken_trade_row(100.0 + idx, 1.0, ms / 1000.0,
                                            idx % 2 ? "s" : "b", idx + 1));
            last_ms = ms + 1000;
            ++emitted;
        }
        res.set_content(
            json{{"error", json::array()},
                 {"result", {{"XXBTZUSD", rows}, {"last", std::to_string(last_ms * 1000000)}}}}
                .dump(),
            "application/json");
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    const auto trades = kraken.fetch_trades("BTC", kStart, kStart + 3600);
    REQUIRE(trades.size() == 6);
    for (std::size_t i = 1; i < trades.size(); ++i)
        CHECK(trades[i].ts_ms > trades[i - 1].ts_ms);
    CHECK(trades[0].side == Side::buy);
    CHECK(trades[1].side == Side::sell);
    CHECK(fx.hits() >= 3);

    CHECK(kraken.fetch_trades("BTC", kStart, kStart).empty());
}

TEST_CASE("kraken error mapping") {
    FixtureServer fx;
    fx.raw().Get("/0/public/OHLC", [&](const httplib::Request& req, httplib::Response& res) {
        if (req.get_param_value("pair") == "NOPEUSD") {
            res.set_content(json{{"error", {"EQuery:Unknown asset pair"}}}.dump(),
                            "application/json");
        } else {
            res.status = 500;
        }
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    CHECK_THROWS_AS(kraken.fetch_candles("NOPE", kStart, kStart + 3600), SymbolUnknown);
    CHECK_THROWS_AS(kraken.fetch_candles("BTC", kStart, kStart + 3600), NetworkError);
}

TEST_CASE("transient server failures are retried with backoff") {
    FixtureServer fx;
    std::atomic<int> calls{0};
    fx.raw().Get("/0/public/OHLC", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls <= 2) {
            res.status = 503;
            return;
        }
        res.set_content(kraken_ohlc_body(kStart, 3), "application/json");
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    const auto candles = kraken.fetch_candles("BTC", kStart, kStart + 3 * 3600);
    CHECK(candles.size() == 3);
    CHECK(calls == 3);
}

TEST_CASE("binance klines and the paper-range candle count") {
    FixtureServer fx;
    fx.raw().Get("/api/v3/klines", [&](const httplib::Request& req, httplib::Response& res) {
        CHECK(req.get_param_value("symbol") == "BTCBUSD");
        CHECK(req.get_param_value("interval") == "1h");
        const std::int64_t from = std::stoll(req.get_param_value("startTime"));
        const std::int64_t to = std::stoll(req.get_param_value("endTime"));
        json rows = json::array();
        int emitted = 0;
        for (std::int64_t ms = from; ms <= to && emitted < 1000; ms += 3'600'000) {
            rows.push_back({ms, "30000.0", "30100.0", "29900.0", "30050.0", "5.5",
                            ms + 3'599'999, "165000.0", 1000, "2.0", "60000.0", "0"});
            ++emitted;
        }
        res.set_content(rows.dump(), "application/json");
    });
    fx.start();

    BinanceClient binance(fx.url(), 1000.0, fast_retry());
    // 01 May 00:00 through 16 May 23:00 inclusive = 384 hourly candles
    const std::int64_t end = parse_utc("2022-05-17T00:00Z");
    const auto candles = binance.fetch_candles("BTC", kStart, end);
    CHECK(candles.size() == 384);
    for (std::size_t i = 1; i < candles.size(); ++i)
        CHECK(candles[i].ts == candles[i - 1].ts + 3600);

    // 3-hour slice: exactly 3, strictly increasing
    const auto three = binance.fetch_candles("BTC", kStart, kStart + 3 * 3600);
    REQUIRE(three.size() == 3);
    CHECK(three[0].ts < three[1].ts);
    CHECK(three[1].ts < three[2].ts);
}

TEST_CASE("binance aggregate trades map the maker flag to the taker side") {
    FixtureServer fx;
    fx.raw().Get("/api/v3/aggTrades", [&](const httplib::Request& req, httplib::Response& res) {
        if (!req.get_param_value("fromId").empty()) {
            res.set_content(json::array().dump(), "application/json");
            return;
        }
        json rows = json::array();
        rows.push_back({{"a", 10}, {"p", "1.00"}, {"q", "5.0"}, {"f", 1}, {"l", 1},
                        {"T", kStart * 1000 + 100}, {"m", true}, {"M", true}});
        rows.push_back({{"a", 11}, {"p", "1.01"}, {"q", "2.0"}, {"f", 2}, {"l", 3},
                        {"T", kStart * 1000 + 250}, {"m", false}, {"M", true}});
        res.set_content(rows.dump(), "application/json");
    });
    fx.start();

    BinanceClient binance(fx.url(), 1000.0, fast_retry());
    const auto trades = binance.fetch_trades("UST", kStart, kStart + 3600);
    REQUIRE(trades.size() == 2);
    // buyer-is-maker means the taker sold
    CHECK(trades[0].side == Side::sell);
    CHECK(trades[0].trade_id == "10");
    CHECK(trades[1].side == Side::buy);
    CHECK(trades[1].amount == 2.0);

    CHECK(binance.fetch_trades("UST", kStart, kStart).empty());
}

TEST_CASE("binance invalid symbol and missing history") {
    FixtureServer fx;
    fx.raw().Get("/api/v3/klines", [&](const httplib::Request& req, httplib::Response& res) {
        if (req.get_param_value("symbol") == "NOPEBUSD") {
            res.status = 400;
            res.set_content(json{{"code", -1121}, {"msg", "Invalid symbol."}}.dump(),
                            "application/json");
        } else {
            res.set_content(json::array().dump(), "application/json");
        }
    });
    fx.start();

    BinanceClient binance(fx.url(), 1000.0, fast_retry());
    CHECK_THROWS_AS(binance.fetch_candles("NOPE", kStart, kStart + 3600), SymbolUnknown);
    CHECK_THROWS_AS(binance.fetch_candles("BTC", kStart, kStart + 3600),
                    HistoryUnavailable);
}

TEST_CASE("kraken range predating trade history") {
    FixtureServer fx;
    // every trade the exchange still has lies after the requested window
    fx.raw().Get("/0/public/Trades", [&](const httplib::Request&, httplib::Response& res) {
        json rows = json::array();
        rows.push_back(kraken_trade_row(10.0, 1.0, static_cast<double>(kStart + 9000), "b", 7));
        res.set_content(
            json{{"error", json::array()},
                 {"result",
                  {{"XXBTZUSD", rows},
                   {"last", std::to_string((kStart + 9000) * 1000000000LL)}}}}
                .dump(),
            "application/json");
    });
    fx.start();

    KrakenClient kraken(fx.url(), 1000.0, fast_retry());
    CHECK_THROWS_AS(kraken.fetch_trades("BTC", kStart - 7200, kStart - 3600),
                    HistoryUnavailable);
}

TEST_CASE("run_fetch populates the store and is idempotent") {
    FixtureServer fx;
    fx.raw().Get("/0/public/OHLC", [&](const httplib::Request&, httplib::Response& res) {
        fx.count_hit();
        res.set_content(kraken_ohlc_body(kStart, 6), "application/json");
    });
    fx.raw().Get("/0/public/Trades", [&](const httplib::Request& req, httplib::Response& res) {
        fx.count_hit();
        const std::int64_t since_ns = std::stoll(req.get_param_value("since"));
        json rows = json::array();
        std::string last = req.get_param_value("since");
        if (since_ns < (kStart + 100) * 1000000000LL) {
            rows.push_back(kraken_trade_row(50.0, 1.0, static_cast<double>(kStart) + 30.0, "b", 1));
            rows.push_back(kraken_trade_row(51.0, 2.0, static_cast<double>(kStart) + 4000.0, "s", 2));
            last = std::to_string((kStart + 4000) * 1000000000LL);
        }
        res.set_content(json{{"error", json::array()},
                             {"result", {{"XXBTZUSD", rows}, {"last", last}}}}
                            .dump(),
                        "application/json");
    });
    fx.start();

    testutil::TempDir tmp("fetch");
    RunConfig cfg;
    cfg.exchange = "kraken";
    cfg.symbols = {"BTC"};
    cfg.start_str = "2022-05-01T00:00Z";
    cfg.end_str = "2022-05-01T06:00Z";
    cfg.store_dir = (tmp.path() / "store").string();
    cfg.base_url = fx.url();
    cfg.rate_limit = 1000.0;

    const auto first = pipeline::run_fetch(cfg);
    CHECK(first.new_candle_rows == 6);
    CHECK(first.new_trade_rows == 2);

    DataStore store{cfg.store_dir};
    CHECK(store.covered("kraken", "BTC", StoreKind::candles, cfg.start(), cfg.end()));
    CHECK(store.covered("kraken", "BTC", StoreKind::trades, cfg.start(), cfg.end()));

    // a complete store fetches nothing and touches the network not at all
    const int hits_before = fx.hits();
    const auto second = pipeline::run_fetch(cfg);
    CHECK(second.new_candle_rows == 0);
    CHECK(second.new_trade_rows == 0);
    CHECK(fx.hits() == hits_before);
}
