#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "crashlens/candle.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/http.hpp"
#include "crashlens/time.hpp"
#include "crashlens/trade.hpp"

namespace crashlens {

class ExchangeClient {
public:
    virtual ~ExchangeClient() = default;
    virtual std::string name() const = 0;
    virtual std::string quote_currency() const = 0;
    // hour candles covering [start, end), ascending, de-duplicated
    virtual std::vector<Candle> fetch_candles(const std::string& symbol,
                                              std::int64_t start, std::int64_t end) = 0;
    // all public trades in [start, end), ascending by (ts_ms, trade_id)
    virtual std::vector<TradeRecord> fetch_trades(const std::string& symbol,
                                                  std::int64_t start, std::int64_t end) = 0;
};

namespace detail {

inline void sort_dedup_trades(std::vector<TradeRecord>& trades) {
    std::sort(trades.begin(), trades.end(), [](const TradeRecord& a, const TradeRecord& b) {
        return a.ts_ms != b.ts_ms ? a.ts_ms < b.ts_ms : a.trade_id < b.trade_id;
    });
    trades.erase(std::unique(trades.begin(), trades.end(),
                             [](const TradeRecord& a, const TradeRecord& b) {
                                 return a.ts_ms == b.ts_ms && a.trade_id == b.trade_id;
                             }),
                 trades.end());
}

inline void sort_dedup_candles(std::vector<Candle>& candles) {
    std::sort(candles.begin(), candles.end(),
              [](const Candle& a, const Candle& b) { return a.ts < b.ts; });
    candles.erase(std::unique(candles.begin(), candles.end(),
                              [](const Candle& a, const Candle& b) { return a.ts == b.ts; }),
                  candles.end());
}

inline double json_number(const nlohmann::json& v) {
    if (v.is_string()) return csv::parse_double(v.get<std::string>());
    return v.get<double>();
}

}  // namespace detail

// Kraken public REST API. The OHLC endpoint only retains the most recent
// candles, so older ranges are rebuilt from the unbounded trade history.
class KrakenClient : public ExchangeClient {
public:
    explicit KrakenClient(std::string base_url = "https://api.kraken.com",
                          double requests_per_second = 1.0, RetryPolicy retry = {})
        : http_(std::move(base_url), requests_per_second, retry) {}

    std::string name() const override { return "kraken"; }
    std::string quote_currency() const override { return "USD"; }

    static std::string pair_name(const std::string& symbol) {
        if (symbol == "BTC") return "XBTUSD";
        if (symbol == "DOGE") return "XDGUSD";
        return symbol + "USD";
    }

    std::vector<Candle> fetch_candles(const std::string& symbol, std::int64_t start,
                                      std::int64_t end) override {
        std::vector<Candle> out;
        if (start >= end) return out;
        const auto result = call("/0/public/OHLC?pair=" + pair_name(symbol) +
                                 "&interval=60&since=" + std::to_string(start - 1));
        const nlohmann::json rows = pair_payload(result);
        for (const auto& r : rows) {
            Candle c;
            c.ts = r.at(0).get<std::int64_t>();
            c.open = detail::json_number(r.at(1));
            c.high = detail::json_number(r.at(2));
            c.low = detail::json_number(r.at(3));
            c.close = detail::json_number(r.at(4));
            c.volume = detail::json_number(r.at(6));
            if (c.ts >= start && c.ts < end) out.push_back(c);
        }
        detail::sort_dedup_candles(out);

        // OHLC history exhausted before `start`: rebuild the prefix from trades
        const std::int64_t reach = out.empty() ? end : out.front().ts;
        if (reach > start) {
            const auto tape = fetch_trades(symbol, start, std::min(reach, end));
            auto rebuilt = build_candles_from_trades(tape);
            rebuilt.insert(rebuilt.end(), out.begin(), out.end());
            detail::sort_dedup_candles(rebuilt);
            out = std::move(rebuilt);
        }
        if (out.empty()) {
            throw HistoryUnavailable("kraken: no candle or trade history for " + symbol +
                                     " in [" + format_utc(start) + ", " + format_utc(end) +
                                     ")");
        }
        return out;
    }

    std::vector<TradeRecord> fetch_trades(const std::string& symbol, std::int64_t start,
                                          std::int64_t end) override {
        std::vector<TradeRecord> out;
        if (start >= end) return out;
        const std::int64_t end_ms = end * 1000;
        std::string cursor = std::to_string(start) + "000000000";  // ns since-cursor
        bool saw_any = false;
        for (;;) {
            const auto result = call("/0/public/Trades?pair=" + pair_name(symbol) +
                                     "&since=" + cursor);
            const nlohmann::json rows = pair_payload(result);
            if (rows.empty()) break;
            saw_any = true;
            std::int64_t last_ms = 0;
            for (const auto& r : rows) {
                TradeRecord t;
                const double ts_sec = detail::json_number(r.at(2));
                t.ts_ms = static_cast<std::int64_t>(std::llround(ts_sec * 1000.0));
                t.price = detail::json_number(r.at(0));
                t.amount = detail::json_number(r.at(1));
                t.side = r.at(3).get<std::string>() == "s" ? Side::sell : Side::buy;
                t.trade_id = r.size() > 6 ? std::to_string(r.at(6).get<std::int64_t>())
                                          : std::to_string(out.size());
                last_ms = t.ts_ms;
                if (t.ts_ms >= start * 1000 && t.ts_ms < end_ms) out.push_back(std::move(t));
            }
            const std::string next = result.value("last", "");
            if (last_ms >= end_ms || next.empty() || next == cursor) break;
            cursor = next;
        }
        detail::sort_dedup_trades(out);
        if (out.empty() && saw_any)
            throw HistoryUnavailable("kraken: trade history for " + symbol +
                                     " starts after " + format_utc(end));
        return out;
    }

private:
    HttpClient http_;

    nlohmann::json call(const std::string& path) {
        const auto body = http_.get(path);
        nlohmann::json j = nlohmann::json::parse(body);
        const auto& errors = j.at("error");
        if (!errors.empty()) {
            const std::string msg = errors.at(0).get<std::string>();
            if (msg.find("Unknown asset pair") != std::string::npos)
                throw SymbolUnknown("kraken: " + msg);
            throw NetworkError("kraken: " + msg);
        }
        return j.at("result");
    }

    // result holds the pair rows under an exchange-normalised key plus "last"
    static nlohmann::json pair_payload(const nlohmann::json& result) {
        for (const auto& [key, value] : result.items())
            if (key != "last" && value.is_array()) return value;
        return nlohmann::json::array();
    }
};

// Binance public REST API; pairs quoted in BUSD. Aggregate trades carry the
// maker flag: buyer-is-maker means the taker sold.
class BinanceClient : public ExchangeClient {
public:
    explicit BinanceClient(std::string base_url = "https://api.binance.com",
                           double requests_per_second = 10.0, RetryPolicy retry = {})
        : http_(std::move(base_url), requests_per_second, retry) {}

    std::string name() const override { return "binance"; }
    std::string quote_currency() const override { return "BUSD"; }

    static std::string pair_name(const std::string& symbol) { return symbol + "BUSD"; }

    std::vector<Candle> fetch_candles(const std::string& symbol, std::int64_t start,
                                      std::int64_t end) override {
        std::vector<Candle> out;
        if (start >= end) return out;
        std::int64_t cursor_ms = start * 1000;
        const std::int64_t end_ms = end * 1000;
        while (cursor_ms < end_ms) {
            const auto rows = call("/api/v3/klines?symbol=" + pair_name(symbol) +
                                   "&interval=1h&startTime=" + std::to_string(cursor_ms) +
                                   "&endTime=" + std::to_string(end_ms - 1) + "&limit=1000");
            if (rows.empty()) break;
            for (const auto& r : rows) {
                Candle c;
                c.ts = r.at(0).get<std::int64_t>() / 1000;
                c.open = detail::json_number(r.at(1));
                c.high = detail::json_number(r.at(2));
                c.low = detail::json_number(r.at(3));
                c.close = detail::json_number(r.at(4));
                c.volume = detail::json_number(r.at(5));
                if (c.ts >= start && c.ts < end) out.push_back(c);
            }
            if (rows.size() < 1000) break;
            cursor_ms = rows.back().at(0).get<std::int64_t>() + kMillisPerHour;
        }
        detail::sort_dedup_candles(out);
        if (out.empty())
            throw HistoryUnavailable("binance: no kline history for " + symbol + " in [" +
                                     format_utc(start) + ", " + format_utc(end) + ")");
        return out;
    }

    std::vector<TradeRecord> fetch_trades(const std::string& symbol, std::int64_t start,
                                          std::int64_t end) override {
        std::vector<TradeRecord> out;
        if (start >= end) return out;
        const std::int64_t start_ms = start * 1000;
        const std::int64_t end_ms = end * 1000;
        auto rows = call("/api/v3/aggTrades?symbol=" + pair_name(symbol) +
                         "&startTime=" + std::to_string(start_ms) +
                         "&endTime=" + std::to_string(end_ms - 1) + "&limit=1000");
        for (;;) {
            std::int64_t last_id = -1;
            std::int64_t last_ms = -1;
            for (const auto& r : rows) {
                TradeRecord t;
                t.ts_ms = r.at("T").get<std::int64_t>();
                t.price = detail::json_number(r.at("p"));
                t.amount = detail::json_number(r.at("q"));
                t.side = r.at("m").get<bool>() ? Side::sell : Side::buy;
                last_id = r.at("a").get<std::int64_t>();
                t.trade_id = std::to_string(last_id);
                last_ms = t.ts_ms;
                if (t.ts_ms >= start_ms && t.ts_ms < end_ms) out.push_back(std::move(t));
            }
            if (rows.size() < 1000 || last_ms >= end_ms) break;
            // id-based pagination avoids dropping trades that share a millisecond
            rows = call("/api/v3/aggTrades?symbol=" + pair_name(symbol) +
                        "&fromId=" + std::to_string(last_id + 1) + "&limit=1000");
        }
        detail::sort_dedup_trades(out);
        return out;
    }

private:
    HttpClient http_;

    nlohmann::json call(const std::string& path) {
        const auto body = [&] {
            try {
                return http_.get(path);
            } catch (const NetworkError& e) {
                const std::string what = e.what();
                if (what.find("-1121") != std::string::npos ||
                    what.find("Invalid symbol") != std::string::npos)
                    throw SymbolUnknown("binance: invalid symbol in " + path);
                throw;
            }
        }();
        return nlohmann::json::parse(body);
    }
};

inline std::unique_ptr<ExchangeClient> make_exchange(const std::string& name,
                                                     const std::string& base_url = "",
                                                     double requests_per_second = 0.0,
                                                     RetryPolicy retry = {}) {
    if (name == "kraken")
        return std::make_unique<KrakenClient>(
            base_url.empty() ? "https://api.kraken.com" : base_url,
            requests_per_second > 0.0 ? requests_per_second : 1.0, retry);
    if (name == "binance")
        return std::make_unique<BinanceClient>(
            base_url.empty() ? "https://api.binance.com" : base_url,
            requests_per_second > 0.0 ? requests_per_second : 10.0, retry);
    throw InvalidParameter("unknown exchange: " + name);
}

}  // namespace crashlens
