#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/time.hpp"
#include "crashlens/trade.hpp"

namespace crashlens {

// Hourly notional per taker side; positive imbalance = net selling pressure.
struct ImbalanceBar {
    std::int64_t hour = 0;  // hour-aligned epoch seconds
    double buy_notional = 0.0;
    double sell_notional = 0.0;
    double imbalance = 0.0;  // sell_notional - buy_notional

    friend bool operator==(const ImbalanceBar&, const ImbalanceBar&) = default;
};

// Aggregate an ascending trade tape into hourly bars. Every hour between the
// first and last trade gets a bar; quiet hours carry explicit zeros.
inline std::vector<ImbalanceBar> hourly_imbalance(const std::vector<TradeRecord>& trades) {
    std::vector<ImbalanceBar> bars;
    if (trades.empty()) return bars;
    for (std::size_t i = 1; i < trades.size(); ++i)
        if (trades[i].ts_ms < trades[i - 1].ts_ms)
            throw UnorderedInput("trade tape is not ascending");
    const std::int64_t first_hour = hour_of_ms(trades.front().ts_ms);
    const std::int64_t last_hour = hour_of_ms(trades.back().ts_ms);
    for (std::int64_t h = first_hour; h <= last_hour; h += kSecondsPerHour)
        bars.push_back({h, 0.0, 0.0, 0.0});
    for (const auto& t : trades) {
        const auto idx = static_cast<std::size_t>((hour_of_ms(t.ts_ms) - first_hour) /
                                                  kSecondsPerHour);
        const double notional = t.price * t.amount;
        if (t.side == Side::buy) bars[idx].buy_notional += notional;
        else bars[idx].sell_notional += notional;
    }
    for (auto& b : bars) b.imbalance = b.sell_notional - b.buy_notional;
    return bars;
}

struct EventMarker {
    std::string label;
    std::int64_t hour = 0;
};

struct ImbalancePeak {
    std::int64_t hour = 0;
    double imbalance = 0.0;
};

struct ImbalanceReport {
    std::vector<ImbalanceBar> bars;
    std::vector<EventMarker> events;
    std::vector<ImbalancePeak> top_selling;  // largest positive bars, descending
    std::vector<ImbalancePeak> top_buying;   // most negative bars, ascending
};

inline ImbalanceReport imbalance_report(const std::vector<ImbalanceBar>& bars,
                                        const std::vector<EventMarker>& events,
                                        std::size_t top_n = 5) {
    ImbalanceReport rep;
    rep.bars = bars;
    rep.events = events;
    std::vector<ImbalancePeak> peaks;
    peaks.reserve(bars.size());
    for (const auto& b : bars) peaks.push_back({b.hour, b.imbalance});
    auto sellers = peaks;
    std::sort(sellers.begin(), sellers.end(), [](const auto& a, const auto& b) {
        return a.imbalance != b.imbalance ? a.imbalance > b.imbalance : a.hour < b.hour;
    });
    auto buyers = peaks;
    std::sort(buyers.begin(), buyers.end(), [](const auto& a, const auto& b) {
        return a.imbalance != b.imbalance ? a.imbalance < b.imbalance : a.hour < b.hour;
    });
    for (std::size_t i = 0; i < std::min(top_n, peaks.size()); ++i) {
        if (sellers[i].imbalance > 0.0) rep.top_selling.push_back(sellers[i]);
        if (buyers[i].imbalance < 0.0) rep.top_buying.push_back(buyers[i]);
    }
    return rep;
}

inline constexpr const char* kImbalanceCsvHeader = "hour,buy_notional,sell_notional,imbalance";

inline std::string imbalance_to_csv(const std::vector<ImbalanceBar>& bars) {
    std::string out = std::string(kImbalanceCsvHeader) + "\n";
    for (const auto& b : bars) {
        out += csv::join_row({csv::format_int(b.hour), csv::format_double(b.buy_notional),
                              csv::format_double(b.sell_notional),
                              csv::format_double(b.imbalance)});
    }
    return out;
}

}  // namespace crashlens
