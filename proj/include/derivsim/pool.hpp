#pragma once

#include <string>
#include <utility>
#include <vector>

#include "derivsim/core.hpp"

namespace derivsim::pool {

struct InsufficientShares : DomainError {
    using DomainError::DomainError;
};

// Reward-bearing pool ledger: fee accrual appreciates the share unit value
// nav/lp_supply; the share supply only moves on deposits and withdrawals.
struct PoolState {
    double nav = 0.0;
    double lp_supply = 0.0;
    double fee_income_cum = 0.0;

    bool empty() const noexcept { return lp_supply == 0.0; }
    double share_value() const noexcept { return empty() ? 0.0 : nav / lp_supply; }
};

// Mints shares pro rata (1:1 on an empty pool). Returns the minted count.
double deposit(PoolState& pool, double amount);

// Fee income raises nav; supply unchanged.
void accrue_fee(PoolState& pool, double amount);

// Burn-and-redeem: returns shares * nav / lp_supply.
double withdraw(PoolState& pool, double shares);

// Event-logged wrapper for the CSV export.
struct PoolEvent {
    std::string event;  // deposit | accrue_fee | withdraw
    double amount = 0.0;
    double shares = 0.0;
    double nav = 0.0;
    double lp_supply = 0.0;
};

class PoolLedger {
public:
    double deposit(double amount);
    void accrue_fee(double amount);
    double withdraw(double shares);

    const PoolState& state() const noexcept { return state_; }
    const std::vector<PoolEvent>& events() const noexcept { return events_; }

private:
    PoolState state_;
    std::vector<PoolEvent> events_;
};

}  // namespace derivsim::pool
