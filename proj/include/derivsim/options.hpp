#pragma once

#include <functional>
#include <variant>

#include "derivsim/core.hpp"

namespace derivsim::options {

struct NotExpiring : DomainError {
    using DomainError::DomainError;
};

struct NotEverlasting : DomainError {
    using DomainError::DomainError;
};

enum class OptionStatus { Open, Settled, Closed };

std::string to_string(OptionStatus status);

using OptionContract = std::variant<ExpiringOptionSpec, EverlastingOptionSpec>;

// Option position held (s = +1) or written (s = -1). Phi accrues funding for
// everlasting contracts only; expiring options carry no time-dependent fees.
struct OptionPosition {
    OptionContract spec;
    int holder_sign = +1;          // s
    double cumulative_fees = 0.0;  // Phi_t
    OptionStatus status = OptionStatus::Open;
    double realized_pnl = 0.0;

    bool is_open() const noexcept { return status == OptionStatus::Open; }
    bool is_expiring() const noexcept {
        return std::holds_alternative<ExpiringOptionSpec>(spec);
    }
    OptionKind kind() const noexcept;
    double strike() const noexcept;
    double contracts() const noexcept;   // n
    double multiplier() const noexcept;  // kappa
    double premium() const noexcept;     // pi
};

OptionPosition open_option(const OptionContract& spec, int holder_sign);

// max(P - K, 0) for a call, max(K - P, 0) for a put.
double intrinsic_value(OptionKind kind, double price, double strike);

// Pluggable mark-value hook; defaults to intrinsic marking. External pricing
// models can be slotted in without touching settlement code.
using ValuationFn = std::function<double(OptionKind, double price, double strike)>;
ValuationFn intrinsic_valuation();

// UPnL = s * n * kappa * (V_t - pi).
double mark_upnl(const OptionPosition& pos, double mark_value);

// Expiry settlement: V_T from intrinsic value, RPnL = s*n*kappa*(V_T - pi)
// - F_open - F_close - Phi_T. Execution fees are charged on traded value:
// premium notional (n*kappa*pi) at entry, settlement value at exit.
void settle_expiry(OptionPosition& pos, double terminal_price, const FeeSchedule& fees);

// Funding accrual for everlasting contracts on strike notional n*kappa*K;
// holder pays when funding is positive, writer receives.
void everlasting_step(OptionPosition& pos, double dt);

// Manual close of an everlasting position at the supplied mark value.
void close_everlasting(OptionPosition& pos, double mark_value, const FeeSchedule& fees);

}  // namespace derivsim::options
