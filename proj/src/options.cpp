#include "derivsim/options.hpp"

#include <algorithm>
#include <cmath>

namespace derivsim::options {

std::string to_string(OptionStatus status) {
    switch (status) {
        case OptionStatus::Open: return "Open";
        case OptionStatus::Settled: return "Settled";
        case OptionStatus::Closed: return "Closed";
    }
    return "Open";
}

namespace {

template <typename F>
auto with_spec(const OptionContract& spec, F&& f) {
    return std::visit(std::forward<F>(f), spec);
}

}  // namespace

OptionKind OptionPosition::kind() const noexcept {
    return with_spec(spec, [](const auto& s) { return s.side; });
}

double OptionPosition::strike() const noexcept {
    return with_spec(spec, [](const auto& s) { return s.strike; });
}

double OptionPosition::contracts() const noexcept {
    return with_spec(spec, [](const auto& s) { return s.contracts; });
}

double OptionPosition::multiplier() const noexcept {
    return with_spec(spec, [](const auto& s) { return s.multiplier; });
}

double OptionPosition::premium() const noexcept {
    return with_spec(spec, [](const auto& s) { return s.premium; });
}

OptionPosition open_option(const OptionContract& spec, int holder_sign) {
    std::visit([](const auto& s) { validate(s); }, spec);
    if (holder_sign != +1 && holder_sign != -1)
        throw InvalidSpec("holder_sign", "must be +1 or -1");
    OptionPosition pos;
    pos.spec = spec;
    pos.holder_sign = holder_sign;
    return pos;
}

double intrinsic_value(OptionKind kind, double price, double strike) {
    if (!(std::isfinite(price) && price > 0.0)) throw InvalidSpec("price", "must be > 0");
    if (!(std::isfinite(strike) && strike > 0.0)) throw InvalidSpec("strike", "must be > 0");
    return kind == OptionKind::Call ? std::max(price - strike, 0.0)
                                    : std::max(strike - price, 0.0);
}

ValuationFn intrinsic_valuation() {
    return [](OptionKind kind, double price, double strike) {
        return intrinsic_value(kind, price, strike);
    };
}

double mark_upnl(const OptionPosition& pos, double mark_value) {
    if (!pos.is_open()) throw StaleState("mark on a non-open option");
    if (!(std::isfinite(mark_value) && mark_value >= 0.0))
        throw InvalidSpec("mark_value", "must be >= 0");
    return pos.holder_sign * pos.contracts() * pos.multiplier() * (mark_value - pos.premium());
}

void settle_expiry(OptionPosition& pos, double terminal_price, const FeeSchedule& fees) {
    if (!pos.is_open()) throw StaleState("settle on a non-open option");
    if (!pos.is_expiring()) throw NotExpiring("settle_expiry on an everlasting option");

    const double n_kappa = pos.contracts() * pos.multiplier();
    const double terminal_value = intrinsic_value(pos.kind(), terminal_price, pos.strike());
    const double open_fee = fees.open_fee_rate * n_kappa * pos.premium();
    const double close_fee = fees.close_fee_rate * n_kappa * terminal_value;
    pos.realized_pnl = pos.holder_sign * n_kappa * (terminal_value - pos.premium()) -
                       open_fee - close_fee - pos.cumulative_fees;
    pos.status = OptionStatus::Settled;
}

void everlasting_step(OptionPosition& pos, double dt) {
    if (!pos.is_open()) throw StaleState("step on a non-open option");
    const auto* spec = std::get_if<EverlastingOptionSpec>(&pos.spec);
    if (spec == nullptr) throw NotEverlasting("everlasting_step on an expiring option");

    if (spec->funding.mode == FundingMode::ConstantRate) {
        const double strike_notional = spec->contracts * spec->multiplier * spec->strike;
        pos.cumulative_fees +=
            pos.holder_sign * strike_notional * spec->funding.accrual_per_step(dt);
    }
}

void close_everlasting(OptionPosition& pos, double mark_value, const FeeSchedule& fees) {
    if (!pos.is_open()) throw StaleState("close on a non-open option");
    const auto* spec = std::get_if<EverlastingOptionSpec>(&pos.spec);
    if (spec == nullptr) throw NotEverlasting("close_everlasting on an expiring option");
    if (!(std::isfinite(mark_value) && mark_value >= 0.0))
        throw InvalidSpec("mark_value", "must be >= 0");

    const double n_kappa = spec->contracts * spec->multiplier;
    const double open_fee = fees.open_fee_rate * n_kappa * spec->premium;
    const double close_fee = fees.close_fee_rate * n_kappa * mark_value;
    pos.realized_pnl = pos.holder_sign * n_kappa * (mark_value - spec->premium) -
                       open_fee - close_fee - pos.cumulative_fees;
    pos.status = OptionStatus::Closed;
}

}  // namespace derivsim::options
