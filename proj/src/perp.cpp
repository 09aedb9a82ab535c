#include "derivsim/perp.hpp"

#include <algorithm>
#include <cmath>

namespace derivsim::perp {

std::string to_string(PositionStatus status) {
    switch (status) {
        case PositionStatus::Open: return "Open";
        case PositionStatus::Closed: return "Closed";
        case PositionStatus::Liquidated: return "Liquidated";
    }
    return "Open";
}

void validate_triggers(const TriggerConfig& triggers, Side side, double fill_price) {
    const auto& sl = triggers.stop_loss;
    const auto& tp = triggers.take_profit;
    if (sl && !(std::isfinite(*sl) && *sl > 0.0))
        throw InvalidSpec("triggers.stop_loss", "must be > 0");
    if (tp && !(std::isfinite(*tp) && *tp > 0.0))
        throw InvalidSpec("triggers.take_profit", "must be > 0");
    if (side == Side::Long) {
        if (sl && *sl >= fill_price)
            throw InvalidSpec("triggers.stop_loss", "must be below the fill price for a long");
        if (tp && *tp <= fill_price)
            throw InvalidSpec("triggers.take_profit", "must be above the fill price for a long");
    } else {
        if (sl && *sl <= fill_price)
            throw InvalidSpec("triggers.stop_loss", "must be above the fill price for a short");
        if (tp && *tp >= fill_price)
            throw InvalidSpec("triggers.take_profit", "must be below the fill price for a short");
    }
}

PerpPosition open_position(const PerpetualSpec& spec, const FeeSchedule& fees,
                           double mark_price) {
    validate(spec);
    validate(fees, "fees");
    if (!(std::isfinite(mark_price) && mark_price > 0.0))
        throw InvalidSpec("mark_price", "must be > 0");

    PerpPosition pos;
    pos.spec = spec;
    pos.fees = fees;
    pos.initial_collateral = spec.collateral_amount;
    pos.fill_price = mark_price * (1.0 + pos.sign() * fees.entry_slippage);
    pos.notional = spec.collateral_amount * spec.leverage;
    pos.quantity = pos.notional / pos.fill_price;
    pos.open_fee = fees.open_fee_rate * pos.notional;
    pos.equity = pos.initial_collateral - pos.open_fee;
    pos.status = PositionStatus::Open;

    if (pos.equity <= pos.maintenance_margin())
        throw ImmediateInsolvency("open fee leaves equity at or below maintenance margin");
    return pos;
}

void step(PerpPosition& pos, double price, double dt) {
    if (!pos.is_open()) throw StaleState("step on a non-open position");
    if (!(std::isfinite(price) && price > 0.0)) throw InvalidSpec("price", "must be > 0");

    pos.cumulative_fees += pos.fees.borrow_rate_per_step * pos.notional;
    if (pos.spec.funding.mode == FundingMode::ConstantRate) {
        // Positive funding: longs pay, shorts receive.
        pos.cumulative_fees += pos.sign() * pos.notional * pos.spec.funding.accrual_per_step(dt);
    }

    const double upnl = pos.sign() * pos.quantity * (price - pos.fill_price);
    pos.equity = pos.initial_collateral - pos.open_fee + upnl - pos.cumulative_fees;
    ++pos.steps_elapsed;

    if (pos.equity <= pos.maintenance_margin()) {
        pos.status = PositionStatus::Liquidated;
        pos.realized_pnl = std::max(pos.equity, 0.0) - pos.initial_collateral;
    }
}

std::optional<CloseInstruction> check_triggers(const PerpPosition& pos, double price,
                                               const TriggerConfig& triggers) {
    if (!pos.is_open()) throw StaleState("trigger check on a non-open position");
    if (pos.spec.side == Side::Long) {
        if (triggers.stop_loss && price <= *triggers.stop_loss) return CloseInstruction::StopLoss;
        if (triggers.take_profit && price >= *triggers.take_profit)
            return CloseInstruction::TakeProfit;
    } else {
        if (triggers.stop_loss && price >= *triggers.stop_loss) return CloseInstruction::StopLoss;
        if (triggers.take_profit && price <= *triggers.take_profit)
            return CloseInstruction::TakeProfit;
    }
    return std::nullopt;
}

void close_position(PerpPosition& pos, double price) {
    if (!pos.is_open()) throw StaleState("close on a non-open position");
    if (!(std::isfinite(price) && price > 0.0)) throw InvalidSpec("price", "must be > 0");

    const double close_fee = pos.fees.close_fee_rate * pos.notional;
    const double upnl = pos.sign() * pos.quantity * (price - pos.fill_price);
    pos.realized_pnl = upnl - pos.open_fee - close_fee - pos.cumulative_fees;
    pos.equity = pos.initial_collateral + pos.realized_pnl;
    pos.status = PositionStatus::Closed;
}

double funding_rate_clamp(double premium_avg, double interest_rate) noexcept {
    const double gap = std::clamp(interest_rate - premium_avg, -0.0005, 0.0005);
    return premium_avg + gap;
}

double funding_premium_dydx(double bid, double ask, double index) {
    if (!(index > 0.0)) throw InvalidSpec("index", "must be > 0");
    if (bid > ask) throw DegenerateBook("bid above ask");
    return (std::max(0.0, bid - index) - std::max(0.0, index - ask)) / index;
}

}  // namespace derivsim::perp
