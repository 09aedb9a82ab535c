#include "derivsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace derivsim::report {

namespace {

std::string fmt(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), format, value);
    return buffer;
}

std::string num(double value) { return fmt("%.10g", value); }
std::string pct1(double fraction) { return fmt("%.1f", 100.0 * fraction); }
std::string dec2(double value) { return fmt("%.2f", value); }

json stats_json(const mc::BatchStats& stats) {
    return json{{"liquidation_probability", stats.liquidation_probability},
                {"liq_prob_standard_error", stats.liq_prob_standard_error},
                {"median_rpnl", stats.median_rpnl},
                {"mean_rpnl", stats.mean_rpnl},
                {"rpnl_quantiles",
                 json{{"q05", stats.rpnl_q05},
                      {"q25", stats.rpnl_q25},
                      {"q75", stats.rpnl_q75},
                      {"q95", stats.rpnl_q95}}},
                {"replications", stats.replications}};
}

json market_json(const paths::MarketParams& market) {
    return json{{"initial_price", market.initial_price},
                {"drift", market.drift},
                {"volatility", market.volatility},
                {"step_size", market.step_size},
                {"horizon", market.horizon},
                {"master_seed", market.master_seed}};
}

json config_json(const mc::ExperimentConfig& config) {
    json j{{"contract", to_json(config.contract)},
           {"preset", to_json(config.preset)},
           {"market", market_json(config.market)},
           {"replications", config.replications}};
    if (config.triggers) {
        json t = json::object();
        if (config.triggers->stop_loss) t["stop_loss"] = *config.triggers->stop_loss;
        if (config.triggers->take_profit) t["take_profit"] = *config.triggers->take_profit;
        j["triggers"] = t;
    }
    return j;
}

}  // namespace

std::string price_path_csv(const paths::PricePath& path) {
    std::ostringstream out;
    out << "step,time_days,price\n";
    for (std::size_t k = 0; k < path.prices.size(); ++k) {
        out << k << ',' << num(path.time_at(k)) << ',' << num(path.prices[k]) << '\n';
    }
    return out.str();
}

std::string perp_trace_csv(const mc::PathResult& result) {
    std::ostringstream out;
    out << "step,price,upnl,fees_cum,equity,margin_req,status\n";
    for (const auto& row : result.trace) {
        out << row.step << ',' << num(row.price) << ',' << num(row.upnl) << ','
            << num(row.fees_cum) << ',' << num(row.equity) << ',' << num(row.margin_req)
            << ',' << row.status << '\n';
    }
    return out.str();
}

std::string cdp_trace_csv(const mc::PathResult& result) {
    std::ostringstream out;
    out << "step,p_coll,p_under,cr,collateral_units,synth_units,status\n";
    for (const auto& row : result.cdp_trace) {
        out << row.step << ',' << num(row.p_coll) << ',' << num(row.p_under) << ','
            << num(row.cr) << ',' << num(row.collateral_units) << ','
            << num(row.synth_units) << ',' << row.status << '\n';
    }
    return out.str();
}

std::string pool_ledger_csv(const pool::PoolLedger& ledger) {
    std::ostringstream out;
    out << "event,amount,shares,nav,lp_supply\n";
    for (const auto& event : ledger.events()) {
        out << event.event << ',' << num(event.amount) << ',' << num(event.shares) << ','
            << num(event.nav) << ',' << num(event.lp_supply) << '\n';
    }
    return out.str();
}

namespace {

std::string cell_text(const mc::BatchStats& stats, GridMetric metric) {
    return metric == GridMetric::LiqProb ? pct1(stats.liquidation_probability)
                                         : dec2(stats.median_rpnl);
}

}  // namespace

std::string grid_csv(const mc::GridResult& grid, GridMetric metric) {
    if (grid.empty_grid()) throw EmptyGrid("grid has no cells");
    std::ostringstream out;
    out << "sigma";
    for (double lev : grid.leverage_axis) out << ",L=" << num(lev);
    out << '\n';
    for (std::size_t i = 0; i < grid.sigma_axis.size(); ++i) {
        out << num(grid.sigma_axis[i]);
        for (std::size_t j = 0; j < grid.leverage_axis.size(); ++j) {
            out << ',' << cell_text(grid.cells[i][j], metric);
        }
        out << '\n';
    }
    return out.str();
}

std::string grid_json(const mc::GridResult& grid) {
    if (grid.empty_grid()) throw EmptyGrid("grid has no cells");
    json cells = json::array();
    for (std::size_t i = 0; i < grid.sigma_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.leverage_axis.size(); ++j) {
            json cell = stats_json(grid.cells[i][j]);
            cell["sigma"] = grid.sigma_axis[i];
            cell["leverage"] = grid.leverage_axis[j];
            cells.push_back(cell);
        }
    }
    json j{{"sigma_axis", grid.sigma_axis},
           {"leverage_axis", grid.leverage_axis},
           {"cells", cells}};
    return j.dump(2) + "\n";
}

std::string batch_json(const mc::ExperimentConfig& config, const mc::BatchStats& stats) {
    json j{{"config", config_json(config)}, {"stats", stats_json(stats)}};
    return j.dump(2) + "\n";
}

std::string tornado_json(const mc::TornadoResult& result) {
    json bars = json::array();
    for (const auto& bar : result.bars) {
        bars.push_back(json{{"parameter", bar.parameter},
                            {"delta_minus_pp", bar.delta_minus_pp},
                            {"delta_plus_pp", bar.delta_plus_pp},
                            {"impact_pp", bar.impact()}});
    }
    json j{{"baseline_liq_prob", result.baseline_liq_prob},
           {"baseline_stats", stats_json(result.baseline_stats)},
           {"bars", bars}};
    return j.dump(2) + "\n";
}

std::string settlement_json(const options::OptionPosition& pos, double terminal_price) {
    json j{{"side", to_string(pos.kind())},
           {"s", pos.holder_sign},
           {"n", pos.contracts()},
           {"kappa", pos.multiplier()},
           {"strike", pos.strike()},
           {"premium", pos.premium()},
           {"terminal_price", terminal_price},
           {"realized_pnl", pos.realized_pnl}};
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

constexpr int kCellW = 72;
constexpr int kCellH = 40;
constexpr int kMarginLeft = 80;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 24;
constexpr int kMarginRight = 24;

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

// Light-to-dark ramp; t in [0, 1].
std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 - 73.0 * t));
    const int g = static_cast<int>(std::lround(245.0 - 205.0 * t));
    const int b = static_cast<int>(std::lround(240.0 - 181.0 * t));
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
    return buffer;
}

void svg_text(std::ostringstream& out, double x, double y, const std::string& text,
              const char* anchor = "middle", const char* fill = "#222",
              int size = 12) {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
        << "\" font-family=\"sans-serif\" font-size=\"" << size << "\" fill=\"" << fill
        << "\">" << esc(text) << "</text>\n";
}

}  // namespace

std::string render_heatmap(const mc::GridResult& grid, GridMetric metric) {
    if (grid.empty_grid()) throw EmptyGrid("heatmap needs a non-empty grid");

    const std::size_t rows = grid.sigma_axis.size();
    const std::size_t cols = grid.leverage_axis.size();
    double lo = 0.0, hi = 0.0;
    bool first = true;
    auto metric_value = [&](const mc::BatchStats& stats) {
        return metric == GridMetric::LiqProb ? stats.liquidation_probability
                                             : stats.median_rpnl;
    };
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = metric_value(grid.cells[i][j]);
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    const double span = hi > lo ? hi - lo : 1.0;

    const int width = kMarginLeft + static_cast<int>(cols) * kCellW + kMarginRight;
    const int height = kMarginTop + static_cast<int>(rows) * kCellH + kMarginBottom;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg_text(out, width / 2.0, 20,
             metric == GridMetric::LiqProb ? "Liquidation probability (%)"
                                           : "Median realized PnL",
             "middle", "#222", 14);

    for (std::size_t j = 0; j < cols; ++j) {
        const double x = kMarginLeft + (static_cast<double>(j) + 0.5) * kCellW;
        svg_text(out, x, kMarginTop - 8, "L=" + num(grid.leverage_axis[j]));
    }
    for (std::size_t i = 0; i < rows; ++i) {
        const double y = kMarginTop + (static_cast<double>(i) + 0.5) * kCellH + 4;
        svg_text(out, kMarginLeft - 10, y, "sigma=" + num(grid.sigma_axis[i]), "end");
    }

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const mc::BatchStats& stats = grid.cells[i][j];
            const double v = metric_value(stats);
            // For PnL the "hot" end is the most negative cell.
            const double t = metric == GridMetric::LiqProb ? (v - lo) / span
                                                           : (hi - v) / span;
            const int x = kMarginLeft + static_cast<int>(j) * kCellW;
            const int y = kMarginTop + static_cast<int>(i) * kCellH;
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
                << "\" height=\"" << kCellH << "\" fill=\"" << heat_color(t)
                << "\" stroke=\"#ffffff\"/>\n";
            svg_text(out, x + kCellW / 2.0, y + kCellH / 2.0 + 4, cell_text(stats, metric),
                     "middle", t > 0.6 ? "#ffffff" : "#222222");
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_tornado(const mc::TornadoResult& result) {
    if (result.bars.empty()) throw EmptyResult("tornado needs at least one bar");

    double max_abs = 0.0;
    for (const auto& bar : result.bars) max_abs = std::max(max_abs, bar.impact());
    if (max_abs == 0.0) max_abs = 1.0;

    constexpr int kBarH = 28;
    constexpr int kGap = 10;
    constexpr int kLeft = 190;
    constexpr int kPlotW = 420;
    constexpr int kTop = 48;
    const int rows = static_cast<int>(result.bars.size());
    const int width = kLeft + kPlotW + 40;
    const int height = kTop + rows * (kBarH + kGap) + 40;
    const double x0 = kLeft + kPlotW / 2.0;  // zero-delta axis
    const double scale = (kPlotW / 2.0 - 10.0) / max_abs;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg_text(out, width / 2.0, 20, "Liquidation probability sensitivity (p.p.)", "middle",
             "#222", 14);

    // Baseline axis.
    const int axis_bottom = kTop + rows * (kBarH + kGap);
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << kTop - 10 << "\" x2=\"" << num(x0)
        << "\" y2=\"" << axis_bottom << "\" stroke=\"#555\" stroke-dasharray=\"5,4\"/>\n";
    svg_text(out, x0, axis_bottom + 24,
             "baseline " + pct1(result.baseline_liq_prob) + "%", "middle", "#555");

    for (int i = 0; i < rows; ++i) {
        const auto& bar = result.bars[static_cast<std::size_t>(i)];
        const int y = kTop + i * (kBarH + kGap);
        svg_text(out, kLeft - 12, y + kBarH / 2.0 + 4, bar.parameter, "end");
        auto draw = [&](double delta, const char* color) {
            const double w = std::fabs(delta) * scale;
            const double x = delta < 0.0 ? x0 - w : x0;
            out << "<rect x=\"" << num(x) << "\" y=\"" << y << "\" width=\"" << num(w)
                << "\" height=\"" << kBarH << "\" fill=\"" << color
                << "\" fill-opacity=\"0.85\"/>\n";
        };
        draw(bar.delta_minus_pp, "#4878a8");
        draw(bar.delta_plus_pp, "#b64f45");
        svg_text(out, x0 - max_abs * scale - 6, y + kBarH / 2.0 + 4,
                 fmt("%+.1f", bar.delta_minus_pp), "end", "#4878a8", 11);
        svg_text(out, x0 + max_abs * scale + 6, y + kBarH / 2.0 + 4,
                 fmt("%+.1f", bar.delta_plus_pp), "start", "#b64f45", 11);
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& file_path, const std::string& content) {
    std::ofstream out(file_path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + file_path);
    out << content;
    if (!out) throw IoError("write failed: " + file_path);
}

}  // namespace derivsim::report
