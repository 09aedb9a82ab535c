#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "derivsim/report.hpp"

using namespace derivsim;
using report::GridMetric;

namespace {

mc::GridResult small_grid() {
    mc::ExperimentConfig config = mc::jupiter_grid_config(5);
    config.replications = 120;
    return mc::grid_sweep(config, {0.02, 0.06}, {2.0, 10.0, 50.0});
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int count = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos;
         at = text.find(needle, at + needle.size()))
        ++count;
    return count;
}

}  // namespace

TEST_CASE("price path CSV carries the header and one row per price") {
    const paths::PricePath path =
        paths::generate_gbm(paths::MarketParams{100.0, 0.0, 0.0, 0.5, 2.0, 1}, 0);
    const auto lines = lines_of(report::price_path_csv(path));
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "step,time_days,price");
    CHECK(lines[1] == "0,0,100");
    CHECK(lines[4] == "3,1.5,100");
}

TEST_CASE("perp trace CSV has the pinned columns") {
    mc::ExperimentConfig config = mc::jupiter_grid_config(5);
    config.replications = 1;
    const mc::PathResult result = mc::run_single(config, 0);
    const auto lines = lines_of(report::perp_trace_csv(result));
    CHECK(lines[0] == "step,price,upnl,fees_cum,equity,margin_req,status");
    CHECK(lines.size() == result.trace.size() + 1);
    CHECK(lines[1].substr(0, 2) == "0,");
}

TEST_CASE("cdp trace CSV has the pinned columns") {
    mc::ExperimentConfig config;
    SyntheticSpec spec;
    spec.underlying = {"sETH", AssetCategory::L1};
    spec.collateral_asset = {"USDC", AssetCategory::Stable};
    config.contract = spec;
    config.preset = load_preset("frictionless");
    config.market = paths::MarketParams{100.0, 0.0, 0.0, 1.0, 3.0, 1};
    const mc::PathResult result = mc::run_single(config, 0);
    const auto lines = lines_of(report::cdp_trace_csv(result));
    CHECK(lines[0] == "step,p_coll,p_under,cr,collateral_units,synth_units,status");
    CHECK(lines.size() == 5);
}

TEST_CASE("pool ledger CSV lists events in order") {
    pool::PoolLedger ledger;
    ledger.deposit(100.0);
    ledger.accrue_fee(5.0);
    const auto lines = lines_of(report::pool_ledger_csv(ledger));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "event,amount,shares,nav,lp_supply");
    CHECK(lines[1] == "deposit,100,100,100,100");
    CHECK(lines[2] == "accrue_fee,5,0,105,100");
}

TEST_CASE("grid CSV matches the reference table layout") {
    const mc::GridResult grid = small_grid();
    const auto lines = lines_of(report::grid_csv(grid, GridMetric::LiqProb));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "sigma,L=2,L=10,L=50");
    CHECK(lines[1].substr(0, 5) == "0.02,");
    CHECK(lines[2].substr(0, 5) == "0.06,");
    // Cells are single-decimal percentages.
    const std::string cell = lines[1].substr(5, lines[1].find(',', 5) - 5);
    CHECK(cell.find('.') != std::string::npos);
    CHECK(cell.size() - cell.find('.') == 2);
}

TEST_CASE("identical grids serialize byte-identically") {
    const mc::GridResult a = small_grid();
    const mc::GridResult b = small_grid();
    CHECK(report::grid_csv(a, GridMetric::LiqProb) == report::grid_csv(b, GridMetric::LiqProb));
    CHECK(report::grid_json(a) == report::grid_json(b));
    CHECK(report::render_heatmap(a, GridMetric::LiqProb) ==
          report::render_heatmap(b, GridMetric::LiqProb));
}

TEST_CASE("batch and tornado JSON are well formed") {
    mc::ExperimentConfig config = mc::jupiter_grid_config(5);
    config.replications = 50;
    const mc::BatchStats stats = mc::run_batch(config);
    const json batch = json::parse(report::batch_json(config, stats));
    CHECK(batch.at("stats").at("replications") == 50);
    CHECK(batch.at("config").at("market").at("master_seed") == 5);

    mc::ExperimentConfig base = mc::tornado_baseline_config(5);
    base.replications = 100;
    const mc::TornadoResult tornado = mc::tornado(base, 0.2, {"leverage", "close_fee"});
    const json tj = json::parse(report::tornado_json(tornado));
    REQUIRE(tj.at("bars").size() == 2);
    CHECK(tj.at("bars")[0].at("parameter") == "leverage");  // sorted by impact
}

TEST_CASE("settlement JSON carries the full record") {
    ExpiringOptionSpec spec;
    spec.underlying = {"ETH", AssetCategory::L1};
    spec.collateral_asset = {"USDC", AssetCategory::Stable};
    spec.side = OptionKind::Call;
    spec.strike = 100.0;
    spec.expiry_days = 7.0;
    spec.contracts = 2.0;
    spec.multiplier = 1.5;
    spec.premium = 5.0;
    options::OptionPosition pos = options::open_option(spec, +1);
    options::settle_expiry(pos, 120.0, FeeSchedule{});
    const json j = json::parse(report::settlement_json(pos, 120.0));
    CHECK(j.at("side") == "Call");
    CHECK(j.at("s") == 1);
    CHECK(j.at("n") == 2.0);
    CHECK(j.at("kappa") == 1.5);
    CHECK(j.at("strike") == 100.0);
    CHECK(j.at("premium") == 5.0);
    CHECK(j.at("terminal_price") == 120.0);
    CHECK(j.at("realized_pnl") == doctest::Approx(2.0 * 1.5 * 15.0));
}

TEST_CASE("heatmap renders one annotated cell per grid cell") {
    const mc::GridResult grid = small_grid();
    const std::string svg = report::render_heatmap(grid, GridMetric::LiqProb);
    CHECK(count_occurrences(svg, "<rect") == 2 * 3 + 1);  // cells + background
    // Annotations equal the CSV cells, same rounding.
    const auto lines = lines_of(report::grid_csv(grid, GridMetric::LiqProb));
    for (std::size_t row = 1; row < lines.size(); ++row) {
        std::istringstream in(lines[row]);
        std::string cell;
        std::getline(in, cell, ',');  // sigma label
        while (std::getline(in, cell, ',')) {
            CHECK(svg.find(">" + cell + "<") != std::string::npos);
        }
    }
    CHECK(svg.find("L=2") != std::string::npos);
    CHECK(svg.find("sigma=0.02") != std::string::npos);
}

TEST_CASE("single-cell heatmap renders without axis degeneracy") {
    mc::ExperimentConfig config = mc::jupiter_grid_config(5);
    config.replications = 30;
    const mc::GridResult grid = mc::grid_sweep(config, {0.04}, {10.0});
    const std::string svg = report::render_heatmap(grid, GridMetric::LiqProb);
    CHECK(count_occurrences(svg, "<rect") == 2);
    CHECK(svg.find("<svg") == 0);
}

TEST_CASE("empty grid and empty tornado are rejected") {
    mc::GridResult grid;
    CHECK_THROWS_AS(report::render_heatmap(grid, GridMetric::LiqProb), report::EmptyGrid);
    CHECK_THROWS_AS(report::grid_csv(grid, GridMetric::LiqProb), report::EmptyGrid);
    mc::TornadoResult tornado;
    CHECK_THROWS_AS(report::render_tornado(tornado), report::EmptyResult);
}

TEST_CASE("tornado SVG keeps the result ordering and baseline line") {
    mc::TornadoResult result;
    result.baseline_liq_prob = 0.33;
    result.bars = {{"volatility", -11.0, 9.0}, {"leverage", -8.0, 7.0}, {"open_fee", 0.0, 0.0}};
    const std::string svg = report::render_tornado(result);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("baseline 33.0%") != std::string::npos);
    const std::size_t vol_at = svg.find(">volatility<");
    const std::size_t lev_at = svg.find(">leverage<");
    const std::size_t fee_at = svg.find(">open_fee<");
    REQUIRE(vol_at != std::string::npos);
    REQUIRE(lev_at != std::string::npos);
    REQUIRE(fee_at != std::string::npos);
    CHECK(vol_at < lev_at);
    CHECK(lev_at < fee_at);
    // Zero-width bar still renders a rect pair plus labels.
    CHECK(count_occurrences(svg, "<rect") >= 6);
}

TEST_CASE("write_text_file round-trips and reports failures") {
    const std::string path = "/tmp/derivsim_report_test.txt";
    report::write_text_file(path, "alpha,beta\n1,2\n");
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == "alpha,beta\n1,2\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(report::write_text_file("/nonexistent_dir/x.csv", "x"), report::IoError);
}
