#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crashlens/asset.hpp"
#include "crashlens/centrality.hpp"
#include "crashlens/correlation.hpp"
#include "crashlens/csv.hpp"
#include "crashlens/ema.hpp"
#include "crashlens/errors.hpp"
#include "crashlens/exchange.hpp"
#include "crashlens/herding.hpp"
#include "crashlens/imbalance.hpp"
#include "crashlens/layout.hpp"
#include "crashlens/panel.hpp"
#include "crashlens/stats.hpp"
#include "crashlens/store.hpp"
#include "crashlens/svg.hpp"
#include "crashlens/tmfg.hpp"

namespace crashlens {

struct RunConfig {
    std::string exchange = "kraken";
    std::vector<std::string> symbols;  // explicit list; registry wins when set
    std::string registry_path;
    std::string start_str = "2022-05-01T00:00Z";
    std::string end_str = "2022-05-17T00:00Z";
    int window = 24;
    int step = 1;
    double theta = 0.3;
    bool theta_literal = false;
    double alpha = 0.3;
    int hac_lag = kAutoLag;
    int rolling_window = 168;
    int max_gap_hours = 6;
    std::vector<std::string> event_labels{"a", "b", "c", "d"};
    std::vector<std::string> event_times{"2022-05-05T12:00Z", "2022-05-07T22:00Z",
                                         "2022-05-09T14:00Z", "2022-05-11T10:00Z"};
    std::vector<std::string> exclude_sectors;
    std::vector<std::string> focus;  // empty -> LUNA/UST/BTC when present
    std::string store_dir = "store";
    std::string out_dir = "out";
    std::string panel_csv;  // analyse a wide close CSV instead of the store
    std::uint64_t seed = 42;
    bool matrix_dumps = false;
    std::string base_url;     // endpoint override (mirrors, tests)
    double rate_limit = 0.0;  // 0 -> exchange default

    std::int64_t start() const { return parse_utc(start_str); }
    std::int64_t end() const { return parse_utc(end_str); }

    ThetaMode theta_mode() const {
        return theta_literal ? ThetaMode::literal : ThetaMode::fraction;
    }

    std::vector<EventMarker> events() const {
        if (event_labels.size() != event_times.size())
            throw InvalidParameter("event labels and times differ in count");
        std::vector<EventMarker> out;
        for (std::size_t i = 0; i < event_labels.size(); ++i)
            out.push_back({event_labels[i], parse_utc(event_times[i])});
        return out;
    }
};

namespace pipeline {

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

inline std::vector<std::string> resolve_symbols(const RunConfig& cfg) {
    std::vector<std::string> symbols = cfg.symbols;
    std::vector<std::string> drop;
    if (!cfg.registry_path.empty()) {
        const auto reg = AssetRegistry::from_csv_file(cfg.registry_path);
        if (symbols.empty()) symbols = reg.symbols();
        for (const auto& sector : cfg.exclude_sectors)
            for (const auto& s : reg.symbols_in_sector(sector)) drop.push_back(s);
    } else if (!cfg.exclude_sectors.empty()) {
        throw InvalidParameter("--exclude-sector requires a registry file");
    }
    std::vector<std::string> out;
    for (const auto& s : symbols)
        if (std::find(drop.begin(), drop.end(), s) == drop.end()) out.push_back(s);
    if (out.empty()) throw InvalidParameter("no symbols selected");
    return out;
}

inline std::vector<std::string> resolve_focus(const RunConfig& cfg,
                                              const std::vector<std::string>& assets) {
    std::vector<std::string> focus;
    const std::vector<std::string> wanted =
        cfg.focus.empty() ? std::vector<std::string>{"LUNA", "UST", "BTC"} : cfg.focus;
    for (const auto& f : wanted)
        if (std::find(assets.begin(), assets.end(), f) != assets.end())
            focus.push_back(f);
    if (!cfg.focus.empty() && focus.size() != cfg.focus.size())
        throw UnknownAsset("focus asset not in the panel");
    if (focus.empty())
        focus.assign(assets.begin(),
                     assets.begin() + std::min<std::size_t>(3, assets.size()));
    return focus;
}

inline PricePanel load_input_panel(const RunConfig& cfg) {
    if (!cfg.panel_csv.empty()) {
        PricePanel p = panel_from_csv_file(cfg.panel_csv);
        if (!cfg.exclude_sectors.empty()) {
            const auto keep = resolve_symbols(cfg);
            std::vector<std::string> kept;
            for (const auto& a : p.assets)
                if (std::find(keep.begin(), keep.end(), a) != keep.end()) kept.push_back(a);
            PricePanel q;
            q.timestamps = p.timestamps;
            q.assets = kept;
            q.close.resize(static_cast<Eigen::Index>(kept.size()), p.close.cols());
            q.fill_flags.setConstant(static_cast<Eigen::Index>(kept.size()),
                                     p.close.cols(), false);
            for (std::size_t i = 0; i < kept.size(); ++i)
                q.close.row(static_cast<Eigen::Index>(i)) = p.close.row(p.index_of(kept[i]));
            return q;
        }
        return p;
    }
    const DataStore store{cfg.store_dir};
    return load_panel(store, cfg.exchange, resolve_symbols(cfg), cfg.start(), cfg.end(),
                      cfg.max_gap_hours);
}

inline std::vector<svg::Marker> svg_markers(const RunConfig& cfg) {
    std::vector<svg::Marker> out;
    for (const auto& e : cfg.events())
        out.push_back({e.label, static_cast<double>(e.hour)});
    return out;
}

inline void warn_markers_outside_range(const RunConfig& cfg) {
    for (const auto& e : cfg.events())
        if (e.hour < cfg.start() || e.hour >= cfg.end())
            std::cerr << "warning: event marker '" << e.label << "' at "
                      << format_utc(e.hour) << " lies outside the date range\n";
}

// ---------------------------------------------------------------- fetch ----

struct FetchSummary {
    std::int64_t new_candle_rows = 0;
    std::int64_t new_trade_rows = 0;
    int symbols_fetched = 0;
};

inline FetchSummary run_fetch(const RunConfig& cfg) {
    const auto symbols = resolve_symbols(cfg);
    DataStore store{cfg.store_dir};
    auto client = make_exchange(cfg.exchange, cfg.base_url, cfg.rate_limit);
    const std::int64_t start = cfg.start();
    const std::int64_t end = cfg.end();
    FetchSummary sum;
    for (const auto& symbol : symbols) {
        ++sum.symbols_fetched;
        for (const StoreKind kind : {StoreKind::candles, StoreKind::trades}) {
            const auto* m = store.manifest(cfg.exchange, symbol, kind);
            const auto gaps = m ? m->gaps(start, end)
                                : std::vector<CoveredRange>{{start, end}};
            for (const auto& gap : gaps) {
                if (kind == StoreKind::candles) {
                    const auto rows = client->fetch_candles(symbol, gap.start, gap.end);
                    sum.new_candle_rows +=
                        store.put_candles(cfg.exchange, symbol, rows, gap);
                } else {
                    const auto rows = client->fetch_trades(symbol, gap.start, gap.end);
                    sum.new_trade_rows += store.put_trades(cfg.exchange, symbol, rows, gap);
                }
            }
        }
    }
    for (const auto& m : store.manifests()) {
        const auto h = m.hull();
        std::cout << m.exchange << " " << m.symbol << " " << to_string(m.kind) << " rows="
                  << m.row_count << " range=[" << format_utc(h.start) << ", "
                  << format_utc(h.end) << ")\n";
    }
    std::cout << "fetch: " << sum.symbols_fetched << " symbols, "
              << sum.new_candle_rows << " new candle rows, " << sum.new_trade_rows
              << " new trade rows\n";
    return sum;
}

// ---------------------------------------------------------------- stats ----

inline void run_stats(const RunConfig& cfg) {
    warn_markers_outside_range(cfg);
    const PricePanel panel = load_input_panel(cfg);
    const ReturnPanel rp = log_returns(panel);
    const MarketReturnSeries m = market_return(rp);

    std::string stats = std::string(kStatsCsvHeader) + "\n";
    for (const auto& asset : panel.assets)
        stats += stats_csv_row(asset, describe(rp, asset));
    stats += stats_csv_row("MARKET", describe_series(m.values));
    csv::write_file(out_path(cfg, "stats.csv").string(), stats);

    // average returns between the first and last event markers inside the range
    std::int64_t win_start = panel.timestamps.front();
    std::int64_t win_end = panel.timestamps.back();
    const auto events = cfg.events();
    std::vector<EventMarker> inside;
    for (const auto& e : events)
        if (e.hour >= win_start && e.hour <= win_end) inside.push_back(e);
    if (inside.size() >= 2) {
        win_start = inside.front().hour;
        win_end = inside.back().hour;
    }
    const auto avg = average_returns(rp, win_start, win_end);
    std::vector<std::pair<std::string, double>> sorted(avg.begin(), avg.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    std::string avg_csv = "asset,avg_return\n";
    for (const auto& [asset, v] : sorted)
        avg_csv += csv::join_row({asset, csv::format_sig(v)});
    csv::write_file(out_path(cfg, "average_returns.csv").string(), avg_csv);

    const Eigen::MatrixXd rescaled = rescale(panel);
    svg::LineChart chart;
    chart.title = "Rescaled hourly closing prices (" + cfg.exchange + ")";
    chart.y_label = "price / first price";
    chart.markers = svg_markers(cfg);
    const auto focus = resolve_focus(cfg, panel.assets);
    std::vector<double> xs;
    for (const auto ts : panel.timestamps) xs.push_back(static_cast<double>(ts));
    for (std::size_t k = 0; k < focus.size(); ++k) {
        svg::Series s;
        s.label = focus[k];
        s.color = svg::palette()[k % svg::palette().size()];
        s.x = xs;
        const Eigen::Index i = panel.index_of(focus[k]);
        for (Eigen::Index t = 0; t < rescaled.cols(); ++t) s.y.push_back(rescaled(i, t));
        chart.series.push_back(std::move(s));
    }
    csv::write_file(out_path(cfg, "rescaled_prices.svg").string(), svg::render(chart));
}

// ----------------------------------------------------------------- corr ----

inline void run_corr(const RunConfig& cfg) {
    const PricePanel panel = load_input_panel(cfg);
    const ReturnPanel rp = log_returns(panel);
    const RollingCorrSeries series =
        rolling_corr(rp, cfg.window, cfg.step, cfg.theta, cfg.theta_mode());
    const auto focus = resolve_focus(cfg, panel.assets);

    std::vector<std::string> lines{kMarketSentinel};
    lines.insert(lines.end(), focus.begin(), focus.end());
    std::string raw_csv = "window_end,asset,avg_corr\n";
    std::string smooth_csv = "window_end,asset,avg_corr\n";
    svg::LineChart chart;
    chart.title = "Smoothed average weighted correlation (" + cfg.exchange + ")";
    chart.y_label = "avg correlation";
    chart.markers = svg_markers(cfg);
    std::vector<double> xs;
    for (const auto ts : series.window_ends) xs.push_back(static_cast<double>(ts));
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto raw = average_corr(series, lines[k]);
        const auto smooth = ema(raw, cfg.alpha);
        for (std::size_t w = 0; w < raw.size(); ++w) {
            raw_csv += csv::join_row({csv::format_int(series.window_ends[w]), lines[k],
                                      csv::format_sig(raw[w])});
            smooth_csv += csv::join_row({csv::format_int(series.window_ends[w]), lines[k],
                                         csv::format_sig(smooth[w])});
        }
        svg::Series s;
        s.label = lines[k];
        s.color = k == 0 ? "#1f77b4" : svg::palette()[(k - 1) % svg::palette().size()];
        s.x = xs;
        s.y = smooth;
        chart.series.push_back(std::move(s));
    }
    csv::write_file(out_path(cfg, "avg_corr.csv").string(), raw_csv);
    csv::write_file(out_path(cfg, "avg_corr_smoothed.csv").string(), smooth_csv);
    csv::write_file(out_path(cfg, "avg_corr.svg").string(), svg::render(chart));

    if (cfg.matrix_dumps) {
        std::string dump = "window_end,asset_i,asset_j,rho,degenerate\n";
        for (const auto& m : series.matrices)
            for (Eigen::Index i = 0; i < m.matrix.rows(); ++i)
                for (Eigen::Index j = i + 1; j < m.matrix.cols(); ++j)
                    dump += csv::join_row(
                        {csv::format_int(m.window_end),
                         series.assets[static_cast<std::size_t>(i)],
                         series.assets[static_cast<std::size_t>(j)],
                         csv::format_sig(m.matrix(i, j)),
                         m.degenerate_flags(i, j) ? "1" : "0"});
        csv::write_file(out_path(cfg, "corr_matrices.csv").string(), dump);
    }
}

// ----------------------------------------------------------------- tmfg ----

inline void run_tmfg(const RunConfig& cfg) {
    const PricePanel panel = load_input_panel(cfg);
    const ReturnPanel rp = log_returns(panel);
    const RollingCorrSeries series =
        rolling_corr(rp, cfg.window, cfg.step, cfg.theta, cfg.theta_mode());
    const auto focus = resolve_focus(cfg, panel.assets);
    const CentralitySeries cs = centrality_series(series, focus, cfg.alpha);

    std::string edges_csv = "window_end,source,target,weight\n";
    for (std::size_t w = 0; w < series.matrices.size(); ++w) {
        const TmfgGraph g = build_tmfg(series.matrices[w].matrix);
        for (const auto& e : g.edges)
            edges_csv += csv::join_row({csv::format_int(series.window_ends[w]),
                                        series.assets[static_cast<std::size_t>(e.i)],
                                        series.assets[static_cast<std::size_t>(e.j)],
                                        csv::format_sig(e.weight)});
    }
    csv::write_file(out_path(cfg, "tmfg_edges.csv").string(), edges_csv);

    std::string cent_csv = "window_end,asset,centrality,smoothed\n";
    std::map<std::string, std::vector<double>> all_smoothed;
    for (const auto& asset : panel.assets) {
        std::vector<double> raw;
        const auto it = std::find(series.assets.begin(), series.assets.end(), asset);
        const auto idx = static_cast<std::size_t>(it - series.assets.begin());
        for (const auto& v : cs.vectors) raw.push_back(v.values[idx]);
        all_smoothed[asset] = ema(raw, cfg.alpha);
        for (std::size_t w = 0; w < raw.size(); ++w)
            cent_csv += csv::join_row({csv::format_int(cs.window_ends[w]), asset,
                                       csv::format_sig(raw[w]),
                                       csv::format_sig(all_smoothed[asset][w])});
    }
    csv::write_file(out_path(cfg, "centrality.csv").string(), cent_csv);

    std::string bands_csv = "window_end,percentile,value\n";
    for (std::size_t w = 0; w < cs.bands.window_ends.size(); ++w)
        for (std::size_t l = 0; l < cs.bands.levels.size(); ++l)
            if (!cs.bands.values[w].empty())
                bands_csv += csv::join_row({csv::format_int(cs.bands.window_ends[w]),
                                            csv::format_int(cs.bands.levels[l]),
                                            csv::format_sig(cs.bands.values[w][l])});
    csv::write_file(out_path(cfg, "centrality_bands.csv").string(), bands_csv);

    svg::LineChart chart;
    chart.title = "TMFG eigenvector centrality (" + cfg.exchange + ")";
    chart.y_label = "centrality";
    chart.markers = svg_markers(cfg);
    std::vector<double> xs;
    for (const auto ts : cs.window_ends) xs.push_back(static_cast<double>(ts));
    const bool has_bands = !cs.bands.window_ends.empty() &&
                           !cs.bands.values.empty() && !cs.bands.values[0].empty();
    if (has_bands) {
        const auto band_of = [&](std::size_t lo_idx, std::size_t hi_idx, double opacity) {
            svg::Band b;
            b.x = xs;
            b.opacity = opacity;
            for (std::size_t w = 0; w < cs.bands.values.size(); ++w) {
                b.lo.push_back(cs.bands.values[w][lo_idx]);
                b.hi.push_back(cs.bands.values[w][hi_idx]);
            }
            return b;
        };
        chart.bands.push_back(band_of(0, 5, 0.12));  // 1-99
        chart.bands.push_back(band_of(1, 4, 0.18));  // 5-95
        chart.bands.push_back(band_of(2, 3, 0.26));  // 25-75
    }
    for (std::size_t k = 0; k < focus.size(); ++k) {
        svg::Series s;
        s.label = focus[k];
        s.color = svg::palette()[k % svg::palette().size()];
        s.x = xs;
        s.y = cs.smoothed.at(focus[k]);
        chart.series.push_back(std::move(s));
    }
    csv::write_file(out_path(cfg, "centrality.svg").string(), svg::render(chart));

    // network snapshots at in-range event markers and at the final window
    std::vector<std::pair<std::string, std::int64_t>> snaps;
    for (const auto& e : cfg.events())
        if (e.hour >= series.window_ends.front() && e.hour <= series.window_ends.back())
            snaps.emplace_back(e.label, e.hour);
    snaps.emplace_back("last", series.window_ends.back());
    for (const auto& [label, hour] : snaps) {
        const auto it = std::lower_bound(series.window_ends.begin(),
                                         series.window_ends.end(), hour);
        if (it == series.window_ends.end()) continue;
        const auto w = static_cast<std::size_t>(it - series.window_ends.begin());
        const TmfgGraph g = build_tmfg(series.matrices[w].matrix);
        const auto pos = force_layout(g, cfg.seed);
        svg::NetworkChart net;
        net.title = "TMFG at " + format_utc(series.window_ends[w]) + " (" + label + ")";
        for (std::size_t i = 0; i < series.assets.size(); ++i) {
            svg::NetworkNode node;
            node.label = series.assets[i];
            node.x = pos[i].x;
            node.y = pos[i].y;
            node.size = 3.0 + 14.0 * cs.vectors[w].values[i];
            node.highlight = std::find(focus.begin(), focus.end(), series.assets[i]) !=
                             focus.end();
            net.nodes.push_back(node);
        }
        for (const auto& e : g.edges) net.edges.push_back({e.i, e.j, e.weight});
        csv::write_file(out_path(cfg, "network_" + label + ".svg").string(),
                        svg::render(net));
    }
}

// ----------------------------------------------------------------- herd ----

inline std::string run_herd(const RunConfig& cfg) {
    const PricePanel panel = load_input_panel(cfg);
    const ReturnPanel rp = log_returns(panel);
    const MarketReturnSeries m = market_return(rp);
    const CsadSeries cs = csad(rp, m);

    const auto sym = run_herding(cs, m, RegressionForm::symmetric, cfg.hac_lag);
    const auto asym = run_herding(cs, m, RegressionForm::asymmetric, cfg.hac_lag);
    csv::write_file(out_path(cfg, "herding.csv").string(),
                    herding_result_csv({sym, asym}));

    std::string csad_csv = "ts,csad,market_return\n";
    for (std::size_t t = 0; t < cs.values.size(); ++t)
        csad_csv += csv::join_row({csv::format_int(cs.timestamps[t]),
                                   csv::format_sig(cs.values[t]),
                                   csv::format_sig(m.values[t])});
    csv::write_file(out_path(cfg, "csad.csv").string(), csad_csv);

    if (static_cast<int>(cs.values.size()) >= cfg.rolling_window) {
        const auto rolling = rolling_herding(cs, m, cfg.rolling_window, cfg.step, cfg.hac_lag);
        std::string roll_csv =
            "window_end,beta3,beta3_sig_neg,beta4,beta4_sig_neg,herding\n";
        for (const auto& w : rolling) {
            const auto& b3 = w.result.coefficients[3];
            const auto& b4 = w.result.coefficients[4];
            roll_csv += csv::join_row({csv::format_int(w.window_end),
                                       csv::format_sig(b3.estimate),
                                       b3.significantly_negative() ? "1" : "0",
                                       csv::format_sig(b4.estimate),
                                       b4.significantly_negative() ? "1" : "0",
                                       w.result.herding_detected() ? "1" : "0"});
        }
        csv::write_file(out_path(cfg, "herding_rolling.csv").string(), roll_csv);
    }

    const std::string summary = (sym.herding_detected() || asym.herding_detected())
                                    ? "significant herding detected"
                                    : "no significant herding";
    std::cout << "herd: " << summary << "\n";
    std::cout << "  symmetric:  " << sym.verdict() << " (adj R2 "
              << csv::format_sig(sym.adj_r2) << ", lag " << sym.hac_lag << ")\n";
    std::cout << "  asymmetric: " << asym.verdict() << " (adj R2 "
              << csv::format_sig(asym.adj_r2) << ", lag " << asym.hac_lag << ")\n";
    return summary;
}

// ------------------------------------------------------------ imbalance ----

inline void run_imbalance(const RunConfig& cfg) {
    const DataStore store{cfg.store_dir};
    std::vector<std::string> focus = cfg.focus;
    if (focus.empty()) focus = {"LUNA", "UST", "BTC"};
    const auto events = cfg.events();
    bool wrote_any = false;
    for (const auto& symbol : focus) {
        const auto tape = store.trades(cfg.exchange, symbol, cfg.start(), cfg.end());
        if (tape.empty()) {
            std::cerr << "imbalance: no stored trades for " << symbol << " on "
                      << cfg.exchange << ", skipping\n";
            continue;
        }
        wrote_any = true;
        const auto bars = hourly_imbalance(tape);
        const auto rep = imbalance_report(bars, events);
        csv::write_file(out_path(cfg, "imbalance_" + symbol + ".csv").string(),
                        imbalance_to_csv(bars));
        std::string peaks = "rank,kind,hour,imbalance\n";
        for (std::size_t i = 0; i < rep.top_selling.size(); ++i)
            peaks += csv::join_row({csv::format_int(static_cast<std::int64_t>(i + 1)),
                                    "selling", csv::format_int(rep.top_selling[i].hour),
                                    csv::format_double(rep.top_selling[i].imbalance)});
        for (std::size_t i = 0; i < rep.top_buying.size(); ++i)
            peaks += csv::join_row({csv::format_int(static_cast<std::int64_t>(i + 1)),
                                    "buying", csv::format_int(rep.top_buying[i].hour),
                                    csv::format_double(rep.top_buying[i].imbalance)});
        csv::write_file(out_path(cfg, "imbalance_" + symbol + "_peaks.csv").string(),
                        peaks);

        svg::ImbalanceChart chart;
        chart.title = "Hourly imbalance: " + symbol + " (" + cfg.exchange +
                      ", quote notional)";
        chart.markers = svg_markers(cfg);
        for (const auto& b : bars) {
            chart.hours.push_back(b.hour);
            chart.imbalance.push_back(b.imbalance);
        }
        csv::write_file(out_path(cfg, "imbalance_" + symbol + ".svg").string(),
                        svg::render(chart));
    }
    if (!wrote_any)
        throw MissingData("imbalance: no stored trades for any focus symbol on " +
                          cfg.exchange);
}

// --------------------------------------------------------------- report ----

inline void run_report(const RunConfig& cfg) {
    const std::filesystem::path out{cfg.out_dir};
    const std::vector<std::pair<std::string, std::vector<std::string>>> stage_files{
        {"stats", {"stats.csv", "average_returns.csv", "rescaled_prices.svg"}},
        {"corr", {"avg_corr.csv", "avg_corr_smoothed.csv", "avg_corr.svg"}},
        {"tmfg",
         {"tmfg_edges.csv", "centrality.csv", "centrality_bands.csv", "centrality.svg"}},
        {"herd", {"herding.csv", "csad.csv"}},
    };
    for (const auto& [stage, files] : stage_files)
        for (const auto& f : files)
            if (!std::filesystem::exists(out / f))
                throw MissingStageOutput("report: stage '" + stage + "' output missing: " + f);
    bool have_imbalance = false;
    for (const auto& entry : std::filesystem::directory_iterator(out))
        if (entry.path().filename().string().rfind("imbalance_", 0) == 0)
            have_imbalance = true;
    if (!have_imbalance)
        throw MissingStageOutput("report: stage 'imbalance' produced no output files");

    const auto report_dir = out / "report";
    std::filesystem::create_directories(report_dir);
    std::vector<std::string> tables;
    std::vector<std::string> plots;
    std::vector<std::filesystem::path> entries;
    for (const auto& entry : std::filesystem::directory_iterator(out))
        if (entry.is_regular_file()) entries.push_back(entry.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries) {
        const auto ext = p.extension().string();
        if (ext != ".csv" && ext != ".svg") continue;
        std::filesystem::copy_file(p, report_dir / p.filename(),
                                   std::filesystem::copy_options::overwrite_existing);
        if (ext == ".csv") tables.push_back(p.filename().string());
        else plots.push_back(p.filename().string());
    }

    std::string html = "<!DOCTYPE html>\n<html><head><title>crashlens report</title>"
                       "</head>\n<body>\n<h1>crashlens report</h1>\n";
    html += "<p>exchange: " + cfg.exchange + ", range: [" + format_utc(cfg.start()) +
            ", " + format_utc(cfg.end()) + ")</p>\n<h2>Plots</h2>\n<ul>\n";
    for (const auto& p : plots) html += "<li><a href=\"" + p + "\">" + p + "</a></li>\n";
    html += "</ul>\n<h2>Tables</h2>\n<ul>\n";
    for (const auto& t : tables) html += "<li><a href=\"" + t + "\">" + t + "</a></li>\n";
    html += "</ul>\n</body></html>\n";
    csv::write_file((report_dir / "index.html").string(), html);
    std::cout << "report: " << plots.size() << " plots, " << tables.size()
              << " tables in " << report_dir.string() << "\n";
}

}  // namespace pipeline
}  // namespace crashlens
