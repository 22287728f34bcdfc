// crashlens: crypto market crash analytics over exchange candle/trade data.
// Subcommands map to pipeline stages; all outputs land under --out.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "crashlens/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crashlens: market-crash analytics (ingestion, correlations, TMFG "
                 "networks, herding regressions, order-flow imbalance)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML config file");

    crashlens::RunConfig cfg;
    app.add_option("--exchange", cfg.exchange, "exchange id: kraken or binance")
        ->capture_default_str();
    app.add_option("--symbols", cfg.symbols, "explicit symbol list");
    app.add_option("--registry", cfg.registry_path, "asset registry CSV (symbol,name,sector)");
    app.add_option("--start", cfg.start_str, "range start, ISO-8601 UTC")
        ->capture_default_str();
    app.add_option("--end", cfg.end_str, "range end (exclusive), ISO-8601 UTC")
        ->capture_default_str();
    app.add_option("--window", cfg.window, "rolling window in return observations")
        ->capture_default_str();
    app.add_option("--step", cfg.step, "rolling step in hours")->capture_default_str();
    app.add_option("--theta", cfg.theta, "correlation weight decay parameter")
        ->capture_default_str();
    app.add_flag("--theta-literal", cfg.theta_literal,
                 "treat theta as an absolute decay instead of a window fraction");
    app.add_option("--alpha", cfg.alpha, "EMA smoothing factor")->capture_default_str();
    app.add_option("--lag", cfg.hac_lag, "Newey-West lag (-1 = automatic)")
        ->capture_default_str();
    app.add_option("--rolling-window", cfg.rolling_window,
                   "rolling herding window in hours")
        ->capture_default_str();
    app.add_option("--max-gap", cfg.max_gap_hours,
                   "max consecutive missing hours to forward-fill")
        ->capture_default_str();
    app.add_option("--event-labels", cfg.event_labels, "event marker labels");
    app.add_option("--event-times", cfg.event_times, "event marker times, ISO-8601 UTC");
    app.add_option("--exclude-sector", cfg.exclude_sectors,
                   "drop all registry assets in this sector (repeatable)");
    app.add_option("--focus", cfg.focus, "assets to highlight in plots and imbalance");
    app.add_option("--store", cfg.store_dir, "data store directory")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--panel", cfg.panel_csv,
                   "analyse a wide close-price CSV instead of the store");
    app.add_option("--seed", cfg.seed, "layout seed")->capture_default_str();
    app.add_flag("--matrix-dumps", cfg.matrix_dumps, "emit full correlation matrices");
    app.add_option("--base-url", cfg.base_url, "exchange endpoint override");
    app.add_option("--rate-limit", cfg.rate_limit,
                   "requests per second (0 = exchange default)");

    auto* cmd_fetch = app.add_subcommand("fetch", "download candles and trades into the store");
    auto* cmd_stats = app.add_subcommand("stats", "descriptive statistics and rescaled prices");
    auto* cmd_corr = app.add_subcommand("corr", "rolling weighted correlations");
    auto* cmd_tmfg = app.add_subcommand("tmfg", "dependency networks and centrality");
    auto* cmd_herd = app.add_subcommand("herd", "CSAD herding regressions");
    auto* cmd_imb = app.add_subcommand("imbalance", "hourly buy/sell imbalance");
    auto* cmd_report = app.add_subcommand("report", "bundle all stage outputs");
    for (auto* sub : {cmd_fetch, cmd_stats, cmd_corr, cmd_tmfg, cmd_herd, cmd_imb, cmd_report})
        sub->fallthrough();  // global flags may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_fetch->parsed()) crashlens::pipeline::run_fetch(cfg);
        if (cmd_stats->parsed()) crashlens::pipeline::run_stats(cfg);
        if (cmd_corr->parsed()) crashlens::pipeline::run_corr(cfg);
        if (cmd_tmfg->parsed()) crashlens::pipeline::run_tmfg(cfg);
        if (cmd_herd->parsed()) crashlens::pipeline::run_herd(cfg);
        if (cmd_imb->parsed()) crashlens::pipeline::run_imbalance(cfg);
        if (cmd_report->parsed()) crashlens::pipeline::run_report(cfg);
    } catch (const crashlens::SymbolUnknown& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const crashlens::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
