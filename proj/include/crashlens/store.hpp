#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "crashlens/candle.hpp"
#include "crashlens/csv.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/panel.hpp"
#include "crashlens/time.hpp"
#include "crashlens/trade.hpp"

namespace crashlens {

enum class StoreKind { candles, trades };

inline const char* to_string(StoreKind k) {
    return k == StoreKind::candles ? "candles" : "trades";
}

struct CoveredRange {
    std::int64_t start = 0;  // epoch seconds, half-open
    std::int64_t end = 0;
};

struct StoreManifest {
    std::string exchange;
    std::string symbol;
    StoreKind kind = StoreKind::candles;
    std::vector<CoveredRange> ranges;  // disjoint, ascending
    std::int64_t row_count = 0;

    CoveredRange hull() const {
        if (ranges.empty()) return {};
        return {ranges.front().start, ranges.back().end};
    }

    bool covers(std::int64_t start, std::int64_t end) const {
        if (start >= end) return true;
        for (const auto& r : ranges)
            if (r.start <= start && end <= r.end) return true;
        return false;
    }

    // subranges of [start, end) not yet covered
    std::vector<CoveredRange> gaps(std::int64_t start, std::int64_t end) const {
        std::vector<CoveredRange> out;
        std::int64_t cursor = start;
        for (const auto& r : ranges) {
            if (r.end <= cursor) continue;
            if (r.start >= end) break;
            if (r.start > cursor) out.push_back({cursor, std::min(r.start, end)});
            cursor = std::max(cursor, r.end);
            if (cursor >= end) break;
        }
        if (cursor < end) out.push_back({cursor, end});
        return out;
    }
};

// Filesystem-backed market-data store: one CSV per (exchange, symbol, kind,
// UTC day) under root, plus manifest.json. Single writer, concurrent readers.
class DataStore {
public:
    explicit DataStore(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
        load_manifest();
    }

    const std::filesystem::path& root() const { return root_; }

    // Merge candles into daily files; duplicate hours keep the incoming row.
    // Returns the number of newly added rows.
    std::int64_t put_candles(const std::string& exchange, const std::string& symbol,
                             const std::vector<Candle>& candles,
                             CoveredRange fetched_range) {
        std::int64_t added = 0;
        std::map<std::string, std::vector<Candle>> by_day;
        for (const auto& c : candles) by_day[format_utc_date(c.ts)].push_back(c);
        for (auto& [day, rows] : by_day) {
            const auto path = file_path(exchange, symbol, StoreKind::candles, day);
            std::map<std::int64_t, Candle> merged;
            if (std::filesystem::exists(path))
                for (const auto& c : candles_from_csv_rows(csv::read_file(path.string())))
                    merged[c.ts] = c;
            const auto before = merged.size();
            for (const auto& c : rows) merged[c.ts] = c;
            added += static_cast<std::int64_t>(merged.size() - before);
            std::vector<Candle> out;
            out.reserve(merged.size());
            for (const auto& [ts, c] : merged) out.push_back(c);
            write_atomic(path, candles_to_csv(out));
        }
        note_coverage(exchange, symbol, StoreKind::candles, fetched_range, added);
        return added;
    }

    std::int64_t put_trades(const std::string& exchange, const std::string& symbol,
                            const std::vector<TradeRecord>& trades,
                            CoveredRange fetched_range) {
        std::int64_t added = 0;
        std::map<std::string, std::vector<TradeRecord>> by_day;
        for (const auto& t : trades)
            by_day[format_utc_date(t.ts_ms / 1000)].push_back(t);
        for (auto& [day, rows] : by_day) {
            const auto path = file_path(exchange, symbol, StoreKind::trades, day);
            std::map<std::pair<std::int64_t, std::string>, TradeRecord> merged;
            if (std::filesystem::exists(path))
                for (const auto& t : trades_from_csv_rows(csv::read_file(path.string())))
                    merged[{t.ts_ms, t.trade_id}] = t;
            const auto before = merged.size();
            for (const auto& t : rows) merged[{t.ts_ms, t.trade_id}] = t;
            added += static_cast<std::int64_t>(merged.size() - before);
            std::vector<TradeRecord> out;
            out.reserve(merged.size());
            for (const auto& [key, t] : merged) out.push_back(t);
            write_atomic(path, trades_to_csv(out));
        }
        note_coverage(exchange, symbol, StoreKind::trades, fetched_range, added);
        return added;
    }

    std::vector<Candle> candles(const std::string& exchange, const std::string& symbol,
                                std::int64_t start, std::int64_t end) const {
        std::vector<Candle> out;
        for_each_day_file(exchange, symbol, StoreKind::candles, start, end,
                          [&](const std::filesystem::path& p) {
                              for (const auto& c :
                                   candles_from_csv_rows(csv::read_file(p.string())))
                                  if (c.ts >= start && c.ts < end) out.push_back(c);
                          });
        std::sort(out.begin(), out.end(),
                  [](const Candle& a, const Candle& b) { return a.ts < b.ts; });
        return out;
    }

    std::vector<TradeRecord> trades(const std::string& exchange, const std::string& symbol,
                                    std::int64_t start, std::int64_t end) const {
        std::vector<TradeRecord> out;
        const std::int64_t start_ms = start * 1000;
        const std::int64_t end_ms = end * 1000;
        for_each_day_file(exchange, symbol, StoreKind::trades, start, end,
                          [&](const std::filesystem::path& p) {
                              for (const auto& t :
                                   trades_from_csv_rows(csv::read_file(p.string())))
                                  if (t.ts_ms >= start_ms && t.ts_ms < end_ms)
                                      out.push_back(t);
                          });
        std::sort(out.begin(), out.end(), [](const TradeRecord& a, const TradeRecord& b) {
            return a.ts_ms != b.ts_ms ? a.ts_ms < b.ts_ms : a.trade_id < b.trade_id;
        });
        return out;
    }

    const StoreManifest* manifest(const std::string& exchange, const std::string& symbol,
                                  StoreKind kind) const {
        const auto it = manifests_.find(key(exchange, symbol, kind));
        return it == manifests_.end() ? nullptr : &it->second;
    }

    std::vector<StoreManifest> manifests() const {
        std::vector<StoreManifest> out;
        out.reserve(manifests_.size());
        for (const auto& [k, m] : manifests_) out.push_back(m);
        return out;
    }

    bool covered(const std::string& exchange, const std::string& symbol, StoreKind kind,
                 std::int64_t start, std::int64_t end) const {
        const auto* m = manifest(exchange, symbol, kind);
        return m && m->covers(start, end);
    }

private:
    std::filesystem::path root_;
    std::map<std::string, StoreManifest> manifests_;

    static std::string key(const std::string& exchange, const std::string& symbol,
                           StoreKind kind) {
        return exchange + "/" + symbol + "/" + to_string(kind);
    }

    std::filesystem::path file_path(const std::string& exchange, const std::string& symbol,
                                    StoreKind kind, const std::string& day) const {
        return root_ / exchange / symbol / to_string(kind) / (day + ".csv");
    }

    template <typename Fn>
    void for_each_day_file(const std::string& exchange, const std::string& symbol,
                           StoreKind kind, std::int64_t start, std::int64_t end,
                           Fn&& fn) const {
        if (start >= end) return;
        const std::int64_t first_day = start - ((start % 86400) + 86400) % 86400;
        for (std::int64_t day = first_day; day < end; day += 86400) {
            const auto p = file_path(exchange, symbol, kind, format_utc_date(day));
            if (std::filesystem::exists(p)) fn(p);
        }
    }

    static void write_atomic(const std::filesystem::path& path, const std::string& content) {
        std::filesystem::create_directories(path.parent_path());
        const auto tmp = path.string() + ".tmp";
        csv::write_file(tmp, content);
        std::filesystem::rename(tmp, path);
    }

    void note_coverage(const std::string& exchange, const std::string& symbol,
                       StoreKind kind, CoveredRange range, std::int64_t added_rows) {
        auto& m = manifests_[key(exchange, symbol, kind)];
        m.exchange = exchange;
        m.symbol = symbol;
        m.kind = kind;
        if (range.start < range.end) {
            m.ranges.push_back(range);
            std::sort(m.ranges.begin(), m.ranges.end(),
                      [](const CoveredRange& a, const CoveredRange& b) {
                          return a.start < b.start;
                      });
            std::vector<CoveredRange> merged;
            for (const auto& r : m.ranges) {
                if (!merged.empty() && r.start <= merged.back().end)
                    merged.back().end = std::max(merged.back().end, r.end);
                else
                    merged.push_back(r);
            }
            m.ranges = std::move(merged);
        }
        m.row_count += added_rows;
        save_manifest();
    }

    void load_manifest() {
        const auto path = root_ / "manifest.json";
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path);
        nlohmann::json j;
        in >> j;
        for (const auto& e : j.at("entries")) {
            StoreManifest m;
            m.exchange = e.at("exchange").get<std::string>();
            m.symbol = e.at("symbol").get<std::string>();
            m.kind = e.at("kind").get<std::string>() == "candles" ? StoreKind::candles
                                                                  : StoreKind::trades;
            for (const auto& r : e.at("ranges"))
                m.ranges.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<std::int64_t>()});
            m.row_count = e.at("rows").get<std::int64_t>();
            manifests_[key(m.exchange, m.symbol, m.kind)] = std::move(m);
        }
    }

    void save_manifest() const {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [k, m] : manifests_) {
            nlohmann::json ranges = nlohmann::json::array();
            for (const auto& r : m.ranges) ranges.push_back({r.start, r.end});
            entries.push_back({{"exchange", m.exchange},
                               {"symbol", m.symbol},
                               {"kind", to_string(m.kind)},
                               {"ranges", ranges},
                               {"rows", m.row_count}});
        }
        const nlohmann::json j{{"entries", entries}};
        const auto path = root_ / "manifest.json";
        const auto tmp = path.string() + ".tmp";
        csv::write_file(tmp, j.dump(2) + "\n");
        std::filesystem::rename(tmp, path);
    }
};

// Aligned close grid from stored candles. A missing hour forward-fills from the
// last close and sets a flag; a leading gap or one longer than max_gap_hours fails.
inline PricePanel load_panel(const DataStore& store, const std::string& exchange,
                             const std::vector<std::string>& symbols,
                             std::int64_t start, std::int64_t end,
                             int max_gap_hours = 6) {
    if (start >= end || start % kSecondsPerHour != 0 || end % kSecondsPerHour != 0)
        throw InvalidParameter("load_panel: range must be hour-aligned and non-empty");
    const auto t_hours = static_cast<Eigen::Index>((end - start) / kSecondsPerHour);
    PricePanel panel;
    panel.assets = symbols;
    panel.close.resize(static_cast<Eigen::Index>(symbols.size()), t_hours);
    panel.fill_flags.setConstant(static_cast<Eigen::Index>(symbols.size()), t_hours, false);
    for (std::int64_t h = 0; h < t_hours; ++h)
        panel.timestamps.push_back(start + h * kSecondsPerHour);

    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const auto rows = store.candles(exchange, symbols[i], start, end);
        if (rows.empty())
            throw MissingSymbol("no stored candles for " + symbols[i] + " on " + exchange);
        std::map<std::int64_t, double> close_by_ts;
        for (const auto& c : rows) close_by_ts[c.ts] = c.close;
        if (!close_by_ts.count(start))
            throw GapTooLarge(symbols[i] + ": first hour " + format_utc(start) +
                              " missing, cannot forward-fill a leading gap");
        double last_close = 0.0;
        int gap = 0;
        for (Eigen::Index col = 0; col < t_hours; ++col) {
            const std::int64_t ts = panel.timestamps[static_cast<std::size_t>(col)];
            const auto it = close_by_ts.find(ts);
            if (it != close_by_ts.end()) {
                last_close = it->second;
                gap = 0;
            } else {
                ++gap;
                if (gap > max_gap_hours)
                    throw GapTooLarge(symbols[i] + ": gap exceeding " +
                                      std::to_string(max_gap_hours) + "h at " +
                                      format_utc(ts - gap * kSecondsPerHour + kSecondsPerHour));
                panel.fill_flags(static_cast<Eigen::Index>(i), col) = true;
            }
            panel.close(static_cast<Eigen::Index>(i), col) = last_close;
        }
    }
    panel.check();
    return panel;
}

}  // namespace crashlens
