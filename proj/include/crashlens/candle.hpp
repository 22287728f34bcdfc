#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/time.hpp"
#include "crashlens/trade.hpp"

namespace crashlens {

// Hour-aligned OHLCV bar; ts marks the hour open (UTC epoch seconds).
struct Candle {
    std::int64_t ts = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    bool valid() const {
        return ts % kSecondsPerHour == 0 && open > 0.0 && high > 0.0 && low > 0.0 &&
               close > 0.0 && volume >= 0.0 && low <= std::min(open, close) &&
               high >= std::max(open, close);
    }

    friend bool operator==(const Candle&, const Candle&) = default;
};

inline constexpr const char* kCandlesCsvHeader = "ts,open,high,low,close,volume";

inline std::string candles_to_csv(const std::vector<Candle>& candles) {
    std::string out = std::string(kCandlesCsvHeader) + "\n";
    for (const auto& c : candles) {
        out += csv::join_row({csv::format_int(c.ts), csv::format_double(c.open),
                              csv::format_double(c.high), csv::format_double(c.low),
                              csv::format_double(c.close), csv::format_double(c.volume)});
    }
    return out;
}

inline std::vector<Candle> candles_from_csv_rows(
    const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty() || csv::join_row(rows[0]) != std::string(kCandlesCsvHeader) + "\n")
        throw ParseError("bad candles CSV header");
    std::vector<Candle> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 6) throw ParseError("bad candles CSV row");
        Candle c;
        c.ts = csv::parse_int(r[0]);
        c.open = csv::parse_double(r[1]);
        c.high = csv::parse_double(r[2]);
        c.low = csv::parse_double(r[3]);
        c.close = csv::parse_double(r[4]);
        c.volume = csv::parse_double(r[5]);
        out.push_back(c);
    }
    return out;
}

// Rebuild hourly candles from an ascending trade tape. Hours without trades
// produce no candle; grid alignment is the panel loader's job.
inline std::vector<Candle> build_candles_from_trades(const std::vector<TradeRecord>& trades) {
    std::vector<Candle> out;
    for (const auto& t : trades) {
        const std::int64_t hour = hour_of_ms(t.ts_ms);
        if (out.empty() || out.back().ts != hour) {
            out.push_back({hour, t.price, t.price, t.price, t.price, t.amount});
        } else {
            Candle& c = out.back();
            c.high = std::max(c.high, t.price);
            c.low = std::min(c.low, t.price);
            c.close = t.price;
            c.volume += t.amount;
        }
    }
    return out;
}

}  // namespace crashlens
