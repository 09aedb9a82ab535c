#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "derivsim/core.hpp"
#include "derivsim/paths.hpp"
#include "derivsim/perp.hpp"

namespace derivsim::mc {

// One simulation experiment: a contract evolved along GBM paths under a
// protocol's fee regime.
struct ExperimentConfig {
    ContractSpec contract;
    ProtocolPreset preset;
    paths::MarketParams market;
    std::uint64_t replications = 500;
    std::optional<perp::TriggerConfig> triggers;
};

void validate(const ExperimentConfig& config);

enum class TerminalEvent { HorizonClose, Liquidated, StopLoss, TakeProfit, Settled, Redeemed };

std::string to_string(TerminalEvent event);

// Lean per-path terminal record; the batch layer aggregates these in path
// order so results never depend on the worker schedule.
struct PathOutcome {
    TerminalEvent event = TerminalEvent::HorizonClose;
    double realized_pnl = 0.0;
    std::size_t exit_step = 0;
    double borrow_fees = 0.0;  // pool-routable share of Phi
};

struct PerpTraceRow {
    std::size_t step = 0;
    double price = 0.0;
    double upnl = 0.0;
    double fees_cum = 0.0;
    double equity = 0.0;
    double margin_req = 0.0;
    std::string status;
};

struct CdpTraceRow {
    std::size_t step = 0;
    double p_coll = 0.0;
    double p_under = 0.0;
    double cr = 0.0;
    double collateral_units = 0.0;
    double synth_units = 0.0;
    std::string status;
};

struct PathResult {
    PathOutcome outcome;
    paths::PricePath path;
    std::vector<PerpTraceRow> trace;      // perps and options
    std::vector<CdpTraceRow> cdp_trace;   // synthetics
};

struct BatchStats {
    double liquidation_probability = 0.0;
    double liq_prob_standard_error = 0.0;
    double median_rpnl = 0.0;
    double mean_rpnl = 0.0;
    double rpnl_q05 = 0.0;
    double rpnl_q25 = 0.0;
    double rpnl_q75 = 0.0;
    double rpnl_q95 = 0.0;
    std::uint64_t replications = 0;
};

struct GridResult {
    std::vector<double> sigma_axis;
    std::vector<double> leverage_axis;
    std::vector<std::vector<BatchStats>> cells;  // [sigma][leverage]

    bool empty_grid() const noexcept { return sigma_axis.empty() || leverage_axis.empty(); }
};

struct TornadoBar {
    std::string parameter;
    double delta_minus_pp = 0.0;  // liq-prob change at -shock, percentage points
    double delta_plus_pp = 0.0;   // liq-prob change at +shock
    double impact() const noexcept;
};

struct TornadoResult {
    double baseline_liq_prob = 0.0;
    BatchStats baseline_stats;
    std::vector<TornadoBar> bars;  // sorted by impact, descending
};

// Worker-count resolution: explicit argument wins, then DERIVSIM_THREADS,
// then hardware concurrency. Thread count never changes results.
unsigned resolve_threads(unsigned requested = 0);

// Evolves one indexed path and records the full per-step trace plus the
// terminal event. Deterministic in (config, path_index).
PathResult run_single(const ExperimentConfig& config, std::uint64_t path_index);

// Terminal outcomes for paths 0..replications-1, parallelized over disjoint
// index ranges.
std::vector<PathOutcome> run_batch_outcomes(const ExperimentConfig& config,
                                            unsigned threads = 0);

BatchStats aggregate(const std::vector<PathOutcome>& outcomes);

BatchStats run_batch(const ExperimentConfig& config, unsigned threads = 0);

// One batch per (sigma, leverage) cell under common random numbers: every
// cell reuses the same master seed and path-index mapping.
GridResult grid_sweep(const ExperimentConfig& base, const std::vector<double>& sigmas,
                      const std::vector<double>& leverages, unsigned threads = 0);

inline const std::vector<std::string>& tornado_default_parameters() {
    static const std::vector<std::string> names = {
        "leverage",      "volatility",
        "open_fee",      "close_fee",
        "borrow_rate",   "maintenance_margin_rate",
        "funding_rate",
    };
    return names;
}

// One-at-a-time multiplicative shocks of (1 +/- shock) per parameter, common
// random numbers across every leg; deltas reported in percentage points and
// bars sorted by impact.
TornadoResult tornado(const ExperimentConfig& base, double shock = 0.20,
                      const std::vector<std::string>& parameters = tornado_default_parameters(),
                      unsigned threads = 0);

// ---------------------------------------------------------------------------
// Canonical experiment setups used by the bundled configs and the test suite
// ---------------------------------------------------------------------------

inline const std::vector<double>& jupiter_grid_sigmas() {
    static const std::vector<double> v = {0.02, 0.04, 0.06, 0.08};
    return v;
}

inline const std::vector<double>& jupiter_grid_leverages() {
    static const std::vector<double> v = {2.0, 5.0, 10.0, 15.0, 20.0, 50.0, 100.0};
    return v;
}

// Long SOL perpetual, 1000 collateral, entry reference 100.
PerpetualSpec jupiter_perp_spec(double leverage, Side side = Side::Long);

// Jupiter-parameterized batch/grid setup: zero drift, hourly steps over a
// 7-day horizon, 500 replications.
ExperimentConfig jupiter_grid_config(std::uint64_t master_seed = 53);

// Sensitivity baseline at (sigma = 0.04, L = 10) with jupiter fees, a small
// constant funding rate, and a mild positive drift; 8000 replications to
// resolve the sub-percentage-point fee bars.
ExperimentConfig tornado_baseline_config(std::uint64_t master_seed = 53);

}  // namespace derivsim::mc
