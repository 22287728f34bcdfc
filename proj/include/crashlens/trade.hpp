#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"

namespace crashlens {

enum class Side { buy, sell };

inline const char* to_string(Side s) { return s == Side::buy ? "buy" : "sell"; }

inline Side side_from_string(std::string_view s) {
    if (s == "buy") return Side::buy;
    if (s == "sell") return Side::sell;
    throw ParseError("bad trade side: '" + std::string(s) + "'");
}

// One public trade; side is the taker (aggressor) side.
struct TradeRecord {
    std::int64_t ts_ms = 0;
    double price = 0.0;
    double amount = 0.0;
    Side side = Side::buy;
    std::string trade_id;

    bool valid() const { return price > 0.0 && amount > 0.0; }

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

inline constexpr const char* kTradesCsvHeader = "ts_ms,price,amount,side,trade_id";

inline std::string trades_to_csv(const std::vector<TradeRecord>& trades) {
    std::string out = std::string(kTradesCsvHeader) + "\n";
    for (const auto& t : trades) {
        out += csv::join_row({csv::format_int(t.ts_ms), csv::format_double(t.price),
                              csv::format_double(t.amount), to_string(t.side),
                              t.trade_id});
    }
    return out;
}

inline std::vector<TradeRecord> trades_from_csv_rows(
    const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty() || csv::join_row(rows[0]) != std::string(kTradesCsvHeader) + "\n")
        throw ParseError("bad trades CSV header");
    std::vector<TradeRecord> out;
    out.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 5) throw ParseError("bad trades CSV row");
        TradeRecord t;
        t.ts_ms = csv::parse_int(r[0]);
        t.price = csv::parse_double(r[1]);
        t.amount = csv::parse_double(r[2]);
        t.side = side_from_string(r[3]);
        t.trade_id = r[4];
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace crashlens
