#include "derivsim/paths.hpp"

#include <cmath>

#include "derivsim/rng.hpp"

namespace derivsim::paths {

void validate(const MarketParams& params) {
    if (!(std::isfinite(params.initial_price) && params.initial_price > 0.0))
        throw InvalidSpec("market.initial_price", "must be > 0");
    if (!std::isfinite(params.drift))
        throw InvalidSpec("market.drift", "must be finite");
    if (!(std::isfinite(params.volatility) && params.volatility >= 0.0))
        throw InvalidSpec("market.volatility", "must be >= 0");
    if (!(std::isfinite(params.step_size) && params.step_size > 0.0))
        throw InvalidSpec("market.step_size", "must be > 0");
    if (!(std::isfinite(params.horizon) && params.horizon >= params.step_size))
        throw InvalidSpec("market.horizon", "must be >= step_size");
    if (params.num_steps() < 1)
        throw InvalidSpec("market.horizon", "must yield at least one step");
}

PricePath generate_gbm(const MarketParams& params, std::uint64_t path_index) {
    validate(params);
    const std::size_t n = params.num_steps();
    const double dt = params.step_size;
    const double det = (params.drift - 0.5 * params.volatility * params.volatility) * dt;
    const double vol = params.volatility * std::sqrt(dt);

    PricePath path;
    path.step_size = dt;
    path.path_index = path_index;
    path.prices.resize(n + 1);
    path.prices[0] = params.initial_price;
    for (std::size_t k = 0; k < n; ++k) {
        const double z = rng::standard_normal(params.master_seed, path_index,
                                              static_cast<std::uint32_t>(k));
        path.prices[k + 1] = path.prices[k] * std::exp(det + vol * z);
    }
    return path;
}

}  // namespace derivsim::paths
