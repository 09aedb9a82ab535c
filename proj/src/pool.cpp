#include "derivsim/pool.hpp"

#include <cmath>

namespace derivsim::pool {

double deposit(PoolState& pool, double amount) {
    if (!(std::isfinite(amount) && amount > 0.0)) throw InvalidSpec("amount", "must be > 0");
    const double shares = pool.empty() ? amount : amount * pool.lp_supply / pool.nav;
    pool.nav += amount;
    pool.lp_supply += shares;
    return shares;
}

void accrue_fee(PoolState& pool, double amount) {
    if (!(std::isfinite(amount) && amount >= 0.0)) throw InvalidSpec("amount", "must be >= 0");
    // Fee income with no outstanding shares has no claimant; accepting it
    // would break nav = 0 <=> lp_supply = 0.
    if (pool.empty() && amount > 0.0)
        throw InvalidSpec("amount", "cannot accrue fees to an empty pool");
    pool.nav += amount;
    pool.fee_income_cum += amount;
}

double withdraw(PoolState& pool, double shares) {
    if (!(std::isfinite(shares) && shares > 0.0)) throw InvalidSpec("shares", "must be > 0");
    if (shares > pool.lp_supply)
        throw InsufficientShares("withdrawal exceeds outstanding share supply");
    const double redeemed = shares * pool.nav / pool.lp_supply;
    pool.nav -= redeemed;
    pool.lp_supply -= shares;
    if (pool.lp_supply == 0.0) pool.nav = 0.0;  // empty-pool convention
    return redeemed;
}

double PoolLedger::deposit(double amount) {
    const double shares = pool::deposit(state_, amount);
    events_.push_back({"deposit", amount, shares, state_.nav, state_.lp_supply});
    return shares;
}

void PoolLedger::accrue_fee(double amount) {
    pool::accrue_fee(state_, amount);
    events_.push_back({"accrue_fee", amount, 0.0, state_.nav, state_.lp_supply});
}

double PoolLedger::withdraw(double shares) {
    const double redeemed = pool::withdraw(state_, shares);
    events_.push_back({"withdraw", redeemed, shares, state_.nav, state_.lp_supply});
    return redeemed;
}

}  // namespace derivsim::pool
