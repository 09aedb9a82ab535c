#include "derivsim/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "derivsim/options.hpp"
#include "derivsim/synth.hpp"

namespace derivsim::mc {

std::string to_string(TerminalEvent event) {
    switch (event) {
        case TerminalEvent::HorizonClose: return "HorizonClose";
        case TerminalEvent::Liquidated: return "Liquidated";
        case TerminalEvent::StopLoss: return "StopLoss";
        case TerminalEvent::TakeProfit: return "TakeProfit";
        case TerminalEvent::Settled: return "Settled";
        case TerminalEvent::Redeemed: return "Redeemed";
    }
    return "HorizonClose";
}

double TornadoBar::impact() const noexcept {
    return std::max(std::fabs(delta_minus_pp), std::fabs(delta_plus_pp));
}

void validate(const ExperimentConfig& config) {
    validate_spec(config.contract);
    derivsim::validate(config.preset);
    paths::validate(config.market);
    if (config.replications < 1)
        throw InvalidSpec("experiment.replications", "must be >= 1");

    if (const auto* opt = std::get_if<ExpiringOptionSpec>(&config.contract)) {
        if (opt->expiry_days > config.market.horizon + 1e-12)
            throw InvalidSpec("expiry_days", "must lie within the market horizon");
    }
    if (config.triggers) {
        const auto* perp_spec = std::get_if<PerpetualSpec>(&config.contract);
        if (perp_spec == nullptr)
            throw InvalidSpec("triggers", "only perpetual contracts support triggers");
        const double fill = config.market.initial_price *
                            (1.0 + sign_of(perp_spec->side) *
                                       config.preset.fee_schedule.entry_slippage);
        perp::validate_triggers(*config.triggers, perp_spec->side, fill);
    }
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DERIVSIM_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) return static_cast<unsigned>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

// Per-step event order: price update, fee/funding accrual, liquidation
// check, then trigger check. The clearinghouse preempts voluntary exits.
PathOutcome evolve_perp(const PerpetualSpec& spec, const ProtocolPreset& preset,
                        const paths::PricePath& path,
                        const std::optional<perp::TriggerConfig>& triggers,
                        std::vector<PerpTraceRow>* trace) {
    PerpetualSpec contract = spec;
    if (preset.funding.mode != FundingMode::None &&
        contract.funding.mode == FundingMode::None) {
        contract.funding = preset.funding;
    }
    perp::PerpPosition pos =
        perp::open_position(contract, preset.fee_schedule, path.prices.front());
    const double dt = path.step_size;
    const std::size_t n = path.num_steps();

    if (trace != nullptr) {
        trace->push_back({0, path.prices.front(), 0.0, 0.0, pos.equity,
                          pos.maintenance_margin(), perp::to_string(pos.status)});
    }

    PathOutcome outcome;
    auto record = [&](std::size_t k, double price) {
        if (trace == nullptr) return;
        const double upnl = pos.sign() * pos.quantity * (price - pos.fill_price);
        trace->push_back({k, price, upnl, pos.cumulative_fees, pos.equity,
                          pos.maintenance_margin(), perp::to_string(pos.status)});
    };

    for (std::size_t k = 1; k <= n; ++k) {
        const double price = path.prices[k];
        perp::step(pos, price, dt);
        if (pos.status == perp::PositionStatus::Liquidated) {
            record(k, price);
            outcome.event = TerminalEvent::Liquidated;
            outcome.exit_step = k;
            break;
        }
        if (triggers) {
            if (const auto fired = perp::check_triggers(pos, price, *triggers)) {
                perp::close_position(pos, price);
                record(k, price);
                outcome.event = *fired == perp::CloseInstruction::StopLoss
                                    ? TerminalEvent::StopLoss
                                    : TerminalEvent::TakeProfit;
                outcome.exit_step = k;
                break;
            }
        }
        if (k == n) {
            perp::close_position(pos, price);
            record(k, price);
            outcome.event = TerminalEvent::HorizonClose;
            outcome.exit_step = k;
            break;
        }
        record(k, price);
    }

    outcome.realized_pnl = pos.realized_pnl;
    outcome.borrow_fees =
        preset.fee_schedule.borrow_rate_per_step * pos.notional *
        static_cast<double>(pos.steps_elapsed);
    return outcome;
}

PathOutcome evolve_expiring_option(const ExpiringOptionSpec& spec,
                                   const ProtocolPreset& preset,
                                   const paths::PricePath& path,
                                   std::vector<PerpTraceRow>* trace) {
    options::OptionPosition pos = options::open_option(spec, +1);
    const double dt = path.step_size;
    const std::size_t expiry_step =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(spec.expiry_days / dt)),
                                1, path.num_steps());

    auto record = [&](std::size_t k) {
        if (trace == nullptr) return;
        const double mark =
            options::intrinsic_value(spec.side, path.prices[k], spec.strike);
        const double upnl = pos.is_open() ? options::mark_upnl(pos, mark) : pos.realized_pnl;
        trace->push_back({k, path.prices[k], upnl, pos.cumulative_fees,
                          upnl - pos.cumulative_fees, 0.0,
                          options::to_string(pos.status)});
    };

    record(0);
    for (std::size_t k = 1; k < expiry_step; ++k) record(k);
    options::settle_expiry(pos, path.prices[expiry_step], preset.fee_schedule);
    record(expiry_step);

    return PathOutcome{TerminalEvent::Settled, pos.realized_pnl, expiry_step, 0.0};
}

PathOutcome evolve_everlasting_option(const EverlastingOptionSpec& spec,
                                      const ProtocolPreset& preset,
                                      const paths::PricePath& path,
                                      std::vector<PerpTraceRow>* trace) {
    EverlastingOptionSpec contract = spec;
    if (preset.funding.mode != FundingMode::None &&
        contract.funding.mode == FundingMode::None) {
        contract.funding = preset.funding;
    }
    options::OptionPosition pos = options::open_option(contract, +1);
    const double dt = path.step_size;
    const std::size_t n = path.num_steps();

    auto record = [&](std::size_t k) {
        if (trace == nullptr) return;
        const double mark =
            options::intrinsic_value(contract.side, path.prices[k], contract.strike);
        const double upnl = pos.is_open() ? options::mark_upnl(pos, mark) : pos.realized_pnl;
        trace->push_back({k, path.prices[k], upnl, pos.cumulative_fees,
                          upnl - pos.cumulative_fees, 0.0,
                          options::to_string(pos.status)});
    };

    record(0);
    for (std::size_t k = 1; k <= n; ++k) {
        options::everlasting_step(pos, dt);
        if (k < n) record(k);
    }
    const double mark =
        options::intrinsic_value(contract.side, path.prices[n], contract.strike);
    options::close_everlasting(pos, mark, preset.fee_schedule);
    record(n);

    return PathOutcome{TerminalEvent::HorizonClose, pos.realized_pnl, n, 0.0};
}

// Synthetic experiments mint against 1000 units of a unit-priced stable
// collateral, sized so the entry CR sits at cr_target, then monitor against
// the path and redeem any survivor at the horizon.
constexpr double kCdpCollateralBudget = 1000.0;
constexpr double kCdpCollateralPrice = 1.0;

PathOutcome evolve_cdp(const SyntheticSpec& spec, const ProtocolPreset& preset,
                       const paths::PricePath& path, std::vector<CdpTraceRow>* trace) {
    const double p_coll = kCdpCollateralPrice;
    const double p0 = path.prices.front();
    const double collateral_units = kCdpCollateralBudget / p_coll;
    const double synth_units = collateral_units * p_coll / (spec.cr_target * p0);
    synth::CdpPosition pos = synth::mint(spec, collateral_units, synth_units, p_coll, p0);
    const std::size_t n = path.num_steps();

    auto record = [&](std::size_t k) {
        if (trace == nullptr) return;
        const double p_under = path.prices[k];
        const double cr = pos.is_open() && pos.synth_units > 0.0
                              ? (pos.collateral_units * p_coll) / (pos.synth_units * p_under)
                              : 0.0;
        trace->push_back({k, p_coll, p_under, cr, pos.collateral_units, pos.synth_units,
                          synth::to_string(pos.status)});
    };

    record(0);
    PathOutcome outcome;
    for (std::size_t k = 1; k <= n; ++k) {
        synth::monitor_and_liquidate(pos, p_coll, path.prices[k]);
        if (pos.status == synth::CdpStatus::Liquidated) {
            record(k);
            outcome = {TerminalEvent::Liquidated, pos.realized_pnl, k, 0.0};
            return outcome;
        }
        if (k == n) {
            synth::redeem(pos, path.prices[k], preset.fee_schedule);
            record(k);
            outcome = {TerminalEvent::Redeemed, pos.realized_pnl, k, 0.0};
            return outcome;
        }
        record(k);
    }
    return outcome;
}

PathOutcome evolve_contract(const ExperimentConfig& config, const paths::PricePath& path,
                            std::vector<PerpTraceRow>* trace,
                            std::vector<CdpTraceRow>* cdp_trace) {
    if (const auto* p = std::get_if<PerpetualSpec>(&config.contract))
        return evolve_perp(*p, config.preset, path, config.triggers, trace);
    if (const auto* e = std::get_if<ExpiringOptionSpec>(&config.contract))
        return evolve_expiring_option(*e, config.preset, path, trace);
    if (const auto* v = std::get_if<EverlastingOptionSpec>(&config.contract))
        return evolve_everlasting_option(*v, config.preset, path, trace);
    return evolve_cdp(std::get<SyntheticSpec>(config.contract), config.preset, path,
                      cdp_trace);
}

}  // namespace

PathResult run_single(const ExperimentConfig& config, std::uint64_t path_index) {
    validate(config);
    PathResult result;
    result.path = paths::generate_gbm(config.market, path_index);
    result.outcome =
        evolve_contract(config, result.path, &result.trace, &result.cdp_trace);
    return result;
}

std::vector<PathOutcome> run_batch_outcomes(const ExperimentConfig& config,
                                            unsigned threads) {
    validate(config);
    const std::uint64_t reps = config.replications;
    std::vector<PathOutcome> outcomes(reps);

    const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                             static_cast<unsigned>(reps)));
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const paths::PricePath path = paths::generate_gbm(config.market, i);
            outcomes[i] = evolve_contract(config, path, nullptr, nullptr);
        }
    };

    if (workers == 1) {
        run_range(0, reps);
        return outcomes;
    }

    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::uint64_t chunk = (reps + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min(reps, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                run_range(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted.front();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

BatchStats aggregate(const std::vector<PathOutcome>& outcomes) {
    BatchStats stats;
    stats.replications = outcomes.size();
    if (outcomes.empty()) return stats;

    std::uint64_t liquidated = 0;
    double sum = 0.0;
    std::vector<double> rpnl;
    rpnl.reserve(outcomes.size());
    for (const auto& outcome : outcomes) {
        liquidated += outcome.event == TerminalEvent::Liquidated ? 1 : 0;
        sum += outcome.realized_pnl;
        rpnl.push_back(outcome.realized_pnl);
    }
    std::sort(rpnl.begin(), rpnl.end());

    const double r = static_cast<double>(outcomes.size());
    const double p = static_cast<double>(liquidated) / r;
    stats.liquidation_probability = p;
    stats.liq_prob_standard_error = std::sqrt(p * (1.0 - p) / r);
    stats.mean_rpnl = sum / r;
    stats.median_rpnl = quantile_sorted(rpnl, 0.50);
    stats.rpnl_q05 = quantile_sorted(rpnl, 0.05);
    stats.rpnl_q25 = quantile_sorted(rpnl, 0.25);
    stats.rpnl_q75 = quantile_sorted(rpnl, 0.75);
    stats.rpnl_q95 = quantile_sorted(rpnl, 0.95);
    return stats;
}

BatchStats run_batch(const ExperimentConfig& config, unsigned threads) {
    return aggregate(run_batch_outcomes(config, threads));
}

GridResult grid_sweep(const ExperimentConfig& base, const std::vector<double>& sigmas,
                      const std::vector<double>& leverages, unsigned threads) {
    if (sigmas.empty()) throw InvalidSpec("grid.sigmas", "axis must be non-empty");
    if (leverages.empty()) throw InvalidSpec("grid.leverages", "axis must be non-empty");
    if (!std::holds_alternative<PerpetualSpec>(base.contract))
        throw InvalidSpec("contract", "grid sweeps require a perpetual contract");

    GridResult grid;
    grid.sigma_axis = sigmas;
    grid.leverage_axis = leverages;
    grid.cells.resize(sigmas.size());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        grid.cells[i].resize(leverages.size());
        for (std::size_t j = 0; j < leverages.size(); ++j) {
            ExperimentConfig cell = base;
            cell.market.volatility = sigmas[i];
            std::get<PerpetualSpec>(cell.contract).leverage = leverages[j];
            grid.cells[i][j] = run_batch(cell, threads);
        }
    }
    return grid;
}

namespace {

ExperimentConfig apply_shock(const ExperimentConfig& base, const std::string& parameter,
                             double factor) {
    ExperimentConfig shocked = base;
    if (parameter == "volatility") {
        shocked.market.volatility *= factor;
        return shocked;
    }
    auto& fees = shocked.preset.fee_schedule;
    if (parameter == "open_fee") {
        fees.open_fee_rate *= factor;
        return shocked;
    }
    if (parameter == "close_fee") {
        fees.close_fee_rate *= factor;
        return shocked;
    }
    if (parameter == "borrow_rate") {
        fees.borrow_rate_per_step *= factor;
        return shocked;
    }
    if (parameter == "maintenance_margin_rate") {
        fees.maintenance_margin_rate *= factor;
        return shocked;
    }
    auto* perp_spec = std::get_if<PerpetualSpec>(&shocked.contract);
    if (perp_spec == nullptr)
        throw InvalidSpec("tornado.parameters",
                          "'" + parameter + "' requires a perpetual contract");
    if (parameter == "leverage") {
        perp_spec->leverage *= factor;
        return shocked;
    }
    if (parameter == "funding_rate") {
        perp_spec->funding.rate *= factor;
        return shocked;
    }
    throw InvalidSpec("tornado.parameters", "unknown parameter '" + parameter + "'");
}

}  // namespace

TornadoResult tornado(const ExperimentConfig& base, double shock,
                      const std::vector<std::string>& parameters, unsigned threads) {
    if (!(shock > 0.0 && shock < 1.0))
        throw InvalidSpec("tornado.shock", "must lie in (0, 1)");
    if (parameters.empty())
        throw InvalidSpec("tornado.parameters", "must name at least one parameter");
    validate(base);

    TornadoResult result;
    result.baseline_stats = run_batch(base, threads);
    result.baseline_liq_prob = result.baseline_stats.liquidation_probability;

    for (const auto& parameter : parameters) {
        const BatchStats down = run_batch(apply_shock(base, parameter, 1.0 - shock), threads);
        const BatchStats up = run_batch(apply_shock(base, parameter, 1.0 + shock), threads);
        result.bars.push_back(TornadoBar{
            parameter,
            100.0 * (down.liquidation_probability - result.baseline_liq_prob),
            100.0 * (up.liquidation_probability - result.baseline_liq_prob),
        });
    }
    std::stable_sort(result.bars.begin(), result.bars.end(),
                     [](const TornadoBar& a, const TornadoBar& b) {
                         return a.impact() > b.impact();
                     });
    return result;
}

// ---------------------------------------------------------------------------
// Canonical setups
// ---------------------------------------------------------------------------

PerpetualSpec jupiter_perp_spec(double leverage, Side side) {
    PerpetualSpec spec;
    spec.underlying = {"SOL", AssetCategory::L1};
    spec.collateral_asset = {"USDC", AssetCategory::Stable};
    spec.collateral_amount = 1000.0;
    spec.leverage = leverage;
    spec.side = side;
    spec.entry_reference_price = 100.0;
    spec.funding = {FundingMode::None, 0.0, 1.0};
    return spec;
}

ExperimentConfig jupiter_grid_config(std::uint64_t master_seed) {
    ExperimentConfig config;
    config.contract = jupiter_perp_spec(10.0);
    config.preset = load_preset("jupiter");
    config.market = paths::MarketParams{100.0, 0.0, 0.04, 1.0 / 24.0, 7.0, master_seed};
    config.replications = 500;
    return config;
}

ExperimentConfig tornado_baseline_config(std::uint64_t master_seed) {
    ExperimentConfig config;
    PerpetualSpec spec = jupiter_perp_spec(10.0);
    spec.funding = {FundingMode::ConstantRate, 0.0005, 1.0};
    config.contract = spec;
    config.preset = load_preset("jupiter");
    config.market = paths::MarketParams{100.0, 0.0035, 0.04, 1.0 / 24.0, 7.0, master_seed};
    config.replications = 8000;
    return config;
}

}  // namespace derivsim::mc
