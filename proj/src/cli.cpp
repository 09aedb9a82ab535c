#include "derivsim/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "derivsim/report.hpp"

namespace derivsim::cli {

namespace fs = std::filesystem;

ExperimentFile parse_experiment_json(const json& document) {
    ExperimentFile file;

    if (!document.contains("contract")) throw InvalidSpec("contract", "missing section");
    file.config.contract = contract_spec_from_json(document.at("contract"));

    if (!document.contains("preset")) throw InvalidSpec("preset", "missing section");
    const json& preset = document.at("preset");
    if (preset.is_string()) {
        file.config.preset = load_preset(preset.get<std::string>());
    } else {
        file.config.preset = protocol_preset_from_json(preset);
    }

    if (document.contains("market")) {
        const json& market = document.at("market");
        auto read = [&](const char* key, double fallback) {
            return market.contains(key) ? market.at(key).get<double>() : fallback;
        };
        file.config.market.initial_price = read("initial_price", 100.0);
        file.config.market.drift = read("drift", 0.0);
        file.config.market.volatility = read("volatility", 0.0);
        file.config.market.step_size = read("step_size", 1.0 / 24.0);
        file.config.market.horizon = read("horizon", 7.0);
        if (market.contains("master_seed"))
            file.config.market.master_seed = market.at("master_seed").get<std::uint64_t>();
    }

    if (document.contains("experiment")) {
        const json& experiment = document.at("experiment");
        if (experiment.contains("replications"))
            file.config.replications = experiment.at("replications").get<std::uint64_t>();
        if (experiment.contains("triggers")) {
            const json& triggers = experiment.at("triggers");
            perp::TriggerConfig t;
            if (triggers.contains("stop_loss"))
                t.stop_loss = triggers.at("stop_loss").get<double>();
            if (triggers.contains("take_profit"))
                t.take_profit = triggers.at("take_profit").get<double>();
            file.config.triggers = t;
        }
        if (experiment.contains("grid")) {
            const json& grid = experiment.at("grid");
            if (grid.contains("sigmas"))
                file.grid_sigmas = grid.at("sigmas").get<std::vector<double>>();
            if (grid.contains("leverages"))
                file.grid_leverages = grid.at("leverages").get<std::vector<double>>();
        }
        if (experiment.contains("tornado")) {
            const json& tornado = experiment.at("tornado");
            if (tornado.contains("shock")) file.tornado_shock = tornado.at("shock").get<double>();
            if (tornado.contains("parameters"))
                file.tornado_parameters =
                    tornado.at("parameters").get<std::vector<std::string>>();
        }
        if (experiment.contains("pool")) {
            file.pool_initial_deposit =
                experiment.at("pool").at("initial_deposit").get<double>();
        }
    }

    if (file.grid_sigmas.empty()) file.grid_sigmas = mc::jupiter_grid_sigmas();
    if (file.grid_leverages.empty()) file.grid_leverages = mc::jupiter_grid_leverages();
    if (file.tornado_parameters.empty())
        file.tornado_parameters = mc::tornado_default_parameters();

    mc::validate(file.config);
    return file;
}

ExperimentFile load_experiment_file(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw report::IoError("cannot read config file: " + config_path);
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidSpec("config", std::string("JSON parse error: ") + e.what());
    }
    return parse_experiment_json(document);
}

namespace {

struct CliOptions {
    std::string config_path;
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::uint64_t path_index = 0;
    bool want_csv = false;
    bool want_json = false;
    bool want_svg = false;

    // No explicit flag selects every format.
    bool all() const { return !want_csv && !want_json && !want_svg; }
    bool csv() const { return all() || want_csv; }
    bool json_out() const { return all() || want_json; }
    bool svg() const { return all() || want_svg; }
};

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw report::IoError("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

ExperimentFile load_for(const CliOptions& options) {
    ExperimentFile file = load_experiment_file(options.config_path);
    if (options.seed_override) {
        file.config.market.master_seed = *options.seed_override;
        mc::validate(file.config);
    }
    return file;
}

int cmd_presets() {
    for (const auto& name : preset_names()) {
        const ProtocolPreset preset = load_preset(name);
        std::cout << name << ": " << to_json(preset).dump() << "\n";
    }
    return 0;
}

int cmd_path(const CliOptions& options) {
    const ExperimentFile file = load_for(options);
    const mc::PathResult result = mc::run_single(file.config, options.path_index);
    ensure_output_dir(options.output_dir);
    if (options.csv()) {
        if (!result.trace.empty())
            report::write_text_file(join(options.output_dir, "path_trace.csv"),
                                    report::perp_trace_csv(result));
        if (!result.cdp_trace.empty())
            report::write_text_file(join(options.output_dir, "cdp_trace.csv"),
                                    report::cdp_trace_csv(result));
        report::write_text_file(join(options.output_dir, "price_path.csv"),
                                report::price_path_csv(result.path));
    }
    if (options.json_out()) {
        if (const auto* spec = std::get_if<ExpiringOptionSpec>(&file.config.contract)) {
            const double terminal = result.path.prices[result.outcome.exit_step];
            options::OptionPosition pos = options::open_option(*spec, +1);
            options::settle_expiry(pos, terminal, file.config.preset.fee_schedule);
            report::write_text_file(join(options.output_dir, "settlement.json"),
                                    report::settlement_json(pos, terminal));
        }
    }
    std::printf("path %llu: %s at step %zu, realized PnL = %.6f\n",
                static_cast<unsigned long long>(options.path_index),
                mc::to_string(result.outcome.event).c_str(), result.outcome.exit_step,
                result.outcome.realized_pnl);
    return 0;
}

int cmd_batch(const CliOptions& options) {
    const ExperimentFile file = load_for(options);
    const std::vector<mc::PathOutcome> outcomes = mc::run_batch_outcomes(file.config);
    const mc::BatchStats stats = mc::aggregate(outcomes);
    ensure_output_dir(options.output_dir);
    if (options.json_out())
        report::write_text_file(join(options.output_dir, "batch.json"),
                                report::batch_json(file.config, stats));
    if (file.pool_initial_deposit && options.csv()) {
        // Borrow fees route to the LP pool; accrual happens in path order so
        // the ledger is schedule-independent.
        pool::PoolLedger ledger;
        ledger.deposit(*file.pool_initial_deposit);
        for (const auto& outcome : outcomes) {
            if (outcome.borrow_fees > 0.0) ledger.accrue_fee(outcome.borrow_fees);
        }
        report::write_text_file(join(options.output_dir, "pool_ledger.csv"),
                                report::pool_ledger_csv(ledger));
    }
    std::printf("liquidation probability = %.1f%% +/- %.1f p.p., median RPnL = %.2f (%llu reps)\n",
                100.0 * stats.liquidation_probability,
                100.0 * stats.liq_prob_standard_error, stats.median_rpnl,
                static_cast<unsigned long long>(stats.replications));
    return 0;
}

int cmd_grid(const CliOptions& options) {
    const ExperimentFile file = load_for(options);
    const mc::GridResult grid =
        mc::grid_sweep(file.config, file.grid_sigmas, file.grid_leverages);
    ensure_output_dir(options.output_dir);
    if (options.csv()) {
        report::write_text_file(join(options.output_dir, "grid.csv"),
                                report::grid_csv(grid, report::GridMetric::LiqProb));
        report::write_text_file(join(options.output_dir, "grid_median_rpnl.csv"),
                                report::grid_csv(grid, report::GridMetric::MedianRpnl));
    }
    if (options.json_out())
        report::write_text_file(join(options.output_dir, "grid.json"),
                                report::grid_json(grid));
    if (options.svg())
        report::write_text_file(join(options.output_dir, "grid.svg"),
                                report::render_heatmap(grid, report::GridMetric::LiqProb));
    double lo = 1.0, hi = 0.0;
    for (const auto& row : grid.cells)
        for (const auto& cell : row) {
            lo = std::min(lo, cell.liquidation_probability);
            hi = std::max(hi, cell.liquidation_probability);
        }
    std::printf("grid %zux%zu written: liquidation probability %.1f%%..%.1f%% (%llu reps/cell)\n",
                grid.sigma_axis.size(), grid.leverage_axis.size(), 100.0 * lo, 100.0 * hi,
                static_cast<unsigned long long>(file.config.replications));
    return 0;
}

int cmd_tornado(const CliOptions& options) {
    const ExperimentFile file = load_for(options);
    const mc::TornadoResult result =
        mc::tornado(file.config, file.tornado_shock, file.tornado_parameters);
    ensure_output_dir(options.output_dir);
    if (options.json_out())
        report::write_text_file(join(options.output_dir, "tornado.json"),
                                report::tornado_json(result));
    if (options.svg())
        report::write_text_file(join(options.output_dir, "tornado.svg"),
                                report::render_tornado(result));
    const auto& top = result.bars.front();
    std::printf("baseline = %.1f%%; top bar %s (%+.1f, %+.1f) p.p.\n",
                100.0 * result.baseline_liq_prob, top.parameter.c_str(),
                top.delta_minus_pp, top.delta_plus_pp);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"DeFi derivative contract simulator"};
    app.require_subcommand(1);

    CliOptions options;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("-c,--config", options.config_path, "experiment JSON document")
                ->required();
        cmd->add_option("-o,--out", options.output_dir, "output directory");
        cmd->add_option("--seed", options.seed_override, "override market.master_seed");
        cmd->add_flag("--csv", options.want_csv, "emit CSV artifacts");
        cmd->add_flag("--json", options.want_json, "emit JSON artifacts");
        cmd->add_flag("--svg", options.want_svg, "emit SVG artifacts");
    };

    CLI::App* path_cmd = app.add_subcommand("path", "trace a single indexed price path");
    add_common(path_cmd, true);
    path_cmd->add_option("--path-index", options.path_index, "path index to trace");

    CLI::App* batch_cmd = app.add_subcommand("batch", "Monte Carlo batch statistics");
    add_common(batch_cmd, true);

    CLI::App* grid_cmd = app.add_subcommand("grid", "(sigma, leverage) sweep");
    add_common(grid_cmd, true);

    CLI::App* tornado_cmd = app.add_subcommand("tornado", "one-at-a-time sensitivity");
    add_common(tornado_cmd, true);

    app.add_subcommand("presets", "list registered protocol presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad usage is a configuration error
    }

    try {
        if (app.got_subcommand("presets")) return cmd_presets();
        if (app.got_subcommand("path")) return cmd_path(options);
        if (app.got_subcommand("batch")) return cmd_batch(options);
        if (app.got_subcommand("grid")) return cmd_grid(options);
        if (app.got_subcommand("tornado")) return cmd_tornado(options);
    } catch (const report::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace derivsim::cli
