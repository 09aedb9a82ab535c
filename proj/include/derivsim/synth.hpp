#pragma once

#include "derivsim/core.hpp"

namespace derivsim::synth {

struct UnderCollateralized : DomainError {
    UnderCollateralized(double cr_, double cr_min_)
        : DomainError("mint rejected: CR " + std::to_string(cr_) + " below minimum " +
                      std::to_string(cr_min_)),
          cr(cr_), cr_min(cr_min_) {}
    double cr;
    double cr_min;
};

// Post-liquidation target unreachable: cr_target <= 1 + penalty. Already
// rejected by spec validation; kept as a guard for hand-built positions.
struct InfeasibleTarget : DomainError {
    using DomainError::DomainError;
};

enum class CdpStatus { Open, Redeemed, Liquidated };

std::string to_string(CdpStatus status);

// Collateralized debt position: c units of collateral back q minted synths.
struct CdpPosition {
    SyntheticSpec spec;
    double collateral_units = 0.0;        // c
    double synth_units = 0.0;             // Q_synth
    double entry_underlying_price = 0.0;  // P^(U)_entry
    CdpStatus status = CdpStatus::Open;
    double realized_pnl = 0.0;

    bool is_open() const noexcept { return status == CdpStatus::Open; }
};

// Mints q synth units against c collateral units iff
// CR = c*p_coll / (q*p_under) >= cr_min.
CdpPosition mint(const SyntheticSpec& spec, double collateral_units, double synth_units,
                 double p_coll, double p_under);

// CR_t = c * P^(C)_t / (Q_synth * P^(U)_t).
double collateral_ratio(const CdpPosition& pos, double p_coll, double p_under);

// No-op while CR > cr_liq. Otherwise repays debt value
//   d = (cr_target * V_debt - V_coll) / (cr_target - (1 + penalty)),
// burning d/p_under synths and seizing d*(1+penalty)/p_coll collateral so the
// surviving position lands exactly at CR = cr_target. When d would exceed the
// debt or exhaust the collateral, the whole debt is retired instead: all
// synths burned, collateral seized up to debt*(1+penalty), any residual
// retained, status Liquidated. The terminal realized_pnl books the synth
// exposure at the liquidation price minus the net seizure cost.
void monitor_and_liquidate(CdpPosition& pos, double p_coll, double p_under);

// Burns the debt and returns all collateral.
// RPnL = q*(p_exit - p_entry) - F_open - F_close, execution fees charged on
// debt value at the respective event (q*p_entry at mint, q*p_exit at redeem).
void redeem(CdpPosition& pos, double p_under_exit, const FeeSchedule& fees);

}  // namespace derivsim::synth
