#include "derivsim/synth.hpp"

#include <algorithm>
#include <cmath>

namespace derivsim::synth {

std::string to_string(CdpStatus status) {
    switch (status) {
        case CdpStatus::Open: return "Open";
        case CdpStatus::Redeemed: return "Redeemed";
        case CdpStatus::Liquidated: return "Liquidated";
    }
    return "Open";
}

namespace {

void require_positive(double value, const char* field) {
    if (!(std::isfinite(value) && value > 0.0)) throw InvalidSpec(field, "must be > 0");
}

}  // namespace

CdpPosition mint(const SyntheticSpec& spec, double collateral_units, double synth_units,
                 double p_coll, double p_under) {
    validate(spec);
    require_positive(collateral_units, "collateral_units");
    require_positive(synth_units, "synth_units");
    require_positive(p_coll, "p_coll");
    require_positive(p_under, "p_under");

    const double cr = (collateral_units * p_coll) / (synth_units * p_under);
    if (cr < spec.cr_min) throw UnderCollateralized(cr, spec.cr_min);

    CdpPosition pos;
    pos.spec = spec;
    pos.collateral_units = collateral_units;
    pos.synth_units = synth_units;
    pos.entry_underlying_price = p_under;
    return pos;
}

double collateral_ratio(const CdpPosition& pos, double p_coll, double p_under) {
    if (!pos.is_open()) throw StaleState("collateral ratio on a non-open position");
    require_positive(p_coll, "p_coll");
    require_positive(p_under, "p_under");
    return (pos.collateral_units * p_coll) / (pos.synth_units * p_under);
}

void monitor_and_liquidate(CdpPosition& pos, double p_coll, double p_under) {
    const double cr = collateral_ratio(pos, p_coll, p_under);
    if (cr > pos.spec.cr_liq) return;

    const double penalty = pos.spec.liquidation_penalty;
    const double denom = pos.spec.cr_target - (1.0 + penalty);
    if (denom <= 0.0) throw InfeasibleTarget("cr_target must exceed 1 + penalty");

    const double coll_value = pos.collateral_units * p_coll;
    const double debt_value = pos.synth_units * p_under;
    const double repay = (pos.spec.cr_target * debt_value - coll_value) / denom;

    if (repay >= debt_value || repay * (1.0 + penalty) >= coll_value) {
        // Full liquidation: retire the whole debt, seize collateral up to
        // debt*(1+penalty), keep any residual for the investor.
        const double seized = std::min(debt_value * (1.0 + penalty), coll_value);
        pos.realized_pnl = pos.synth_units * (p_under - pos.entry_underlying_price) -
                           (seized - debt_value);
        pos.collateral_units = (coll_value - seized) / p_coll;
        pos.synth_units = 0.0;
        pos.status = CdpStatus::Liquidated;
        return;
    }

    pos.synth_units -= repay / p_under;
    pos.collateral_units -= repay * (1.0 + penalty) / p_coll;
}

void redeem(CdpPosition& pos, double p_under_exit, const FeeSchedule& fees) {
    if (!pos.is_open()) throw StaleState("redeem on a non-open position");
    require_positive(p_under_exit, "p_under_exit");

    const double open_fee = fees.open_fee_rate * pos.synth_units * pos.entry_underlying_price;
    const double close_fee = fees.close_fee_rate * pos.synth_units * p_under_exit;
    pos.realized_pnl =
        pos.synth_units * (p_under_exit - pos.entry_underlying_price) - open_fee - close_fee;
    pos.status = CdpStatus::Redeemed;
}

}  // namespace derivsim::synth
