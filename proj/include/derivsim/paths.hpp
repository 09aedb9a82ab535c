#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "derivsim/core.hpp"

namespace derivsim::paths {

// Geometric Brownian motion configuration. Drift and volatility are per day;
// the default grid is hourly steps over a 7-day horizon.
struct MarketParams {
    double initial_price = 100.0;   // P0
    double drift = 0.0;             // mu, per day
    double volatility = 0.0;        // sigma, per day
    double step_size = 1.0 / 24.0;  // dt, days
    double horizon = 7.0;           // T, days
    std::uint64_t master_seed = 42;

    std::size_t num_steps() const noexcept {
        return static_cast<std::size_t>(std::llround(horizon / step_size));
    }
};

void validate(const MarketParams& params);

// One realized trajectory: N+1 prices, prices[0] == initial_price.
struct PricePath {
    std::vector<double> prices;
    double step_size = 0.0;
    std::uint64_t path_index = 0;

    std::size_t num_steps() const noexcept { return prices.empty() ? 0 : prices.size() - 1; }
    double time_at(std::size_t k) const noexcept { return step_size * static_cast<double>(k); }
};

// Exact log-Euler discretization of dP = mu P dt + sigma P dW:
//   P_{k+1} = P_k * exp((mu - sigma^2/2) dt + sigma sqrt(dt) Z_k)
// Z_k comes from the counter-based stream keyed (master_seed, path_index, k),
// so identical inputs give bit-identical paths under any parallel schedule,
// and every price stays strictly positive.
PricePath generate_gbm(const MarketParams& params, std::uint64_t path_index);

}  // namespace derivsim::paths
