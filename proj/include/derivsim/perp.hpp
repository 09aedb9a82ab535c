#pragma once

#include <optional>

#include "derivsim/core.hpp"

namespace derivsim::perp {

// Position opened at birth with margin already below maintenance.
struct ImmediateInsolvency : DomainError {
    using DomainError::DomainError;
};

// Order book with bid above ask.
struct DegenerateBook : DomainError {
    using DomainError::DomainError;
};

enum class PositionStatus { Open, Closed, Liquidated };

std::string to_string(PositionStatus status);

// Live perpetual position. Notional is fixed at entry (no resizing);
// cumulative_fees excludes the one-off open/close fees.
struct PerpPosition {
    PerpetualSpec spec;
    FeeSchedule fees;
    double fill_price = 0.0;          // slippage-adjusted entry
    double quantity = 0.0;            // |Q|, sign carried by spec.side
    double notional = 0.0;            // NV = C0 * L
    double initial_collateral = 0.0;  // C0
    double open_fee = 0.0;            // F_open
    double cumulative_fees = 0.0;     // Phi_t: borrow + funding
    double equity = 0.0;
    PositionStatus status = PositionStatus::Open;
    double realized_pnl = 0.0;        // set on exit
    std::uint64_t steps_elapsed = 0;

    double maintenance_margin() const noexcept {
        return fees.maintenance_margin_rate * notional;
    }
    double sign() const noexcept { return sign_of(spec.side); }
    bool is_open() const noexcept { return status == PositionStatus::Open; }
};

// Stop-loss / take-profit levels; either may be absent.
struct TriggerConfig {
    std::optional<double> stop_loss;
    std::optional<double> take_profit;
};

// Long: stop_loss < fill < take_profit when both present; mirrored for shorts.
void validate_triggers(const TriggerConfig& triggers, Side side, double fill_price);

// Entry fills against the trader at mark*(1 + S*slippage); Q = C0*L/fill,
// NV = C0*L, F_open = open_fee_rate*NV deducted from equity. Throws
// ImmediateInsolvency if the position would be liquidatable at birth.
PerpPosition open_position(const PerpetualSpec& spec, const FeeSchedule& fees,
                           double mark_price);

// One step at the new mark price: accrue borrow and funding into Phi,
// recompute equity, then liquidate if equity <= r_m*NV (the trader recovers
// max(equity, 0)). Positive funding debits longs and credits shorts.
void step(PerpPosition& pos, double price, double dt);

enum class CloseInstruction { StopLoss, TakeProfit };

// Trigger scan; by contract the liquidation check inside step() precedes this
// within the same step.
std::optional<CloseInstruction> check_triggers(const PerpPosition& pos, double price,
                                               const TriggerConfig& triggers);

// Voluntary close: RPnL = S*Q*(P - fill) - F_open - F_close - Phi.
void close_position(PerpPosition& pos, double price);

// Hyperliquid-style hourly funding rate:
//   premium_avg + clamp(interest_rate - premium_avg, -0.0005, 0.0005)
double funding_rate_clamp(double premium_avg, double interest_rate) noexcept;

// dYdX funding premium: (max(0, bid - index) - max(0, index - ask)) / index.
double funding_premium_dydx(double bid, double ask, double index);

}  // namespace derivsim::perp
