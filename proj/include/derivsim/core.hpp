#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace derivsim {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Base for all domain errors so callers can catch one type at the boundary.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A contract or parameter set violates one of its invariants.
struct InvalidSpec : DomainError {
    InvalidSpec(std::string field_, const std::string& reason)
        : DomainError("invalid spec: " + field_ + ": " + reason), field(std::move(field_)) {}
    std::string field;
};

struct UnknownPreset : DomainError {
    explicit UnknownPreset(const std::string& name)
        : DomainError("unknown preset: " + name) {}
};

// Operation applied to a position that already reached a terminal state.
struct StaleState : DomainError {
    using DomainError::DomainError;
};

// ---------------------------------------------------------------------------
// Assets and direction
// ---------------------------------------------------------------------------

enum class AssetCategory { L1, L2, DeFi, Meme, Gaming, Forex, RWA, Stable };

struct AssetRef {
    std::string symbol;
    AssetCategory category = AssetCategory::L1;
};

enum class Side { Long, Short };

// Position sign S: +1 long, -1 short.
constexpr double sign_of(Side side) noexcept { return side == Side::Long ? 1.0 : -1.0; }

enum class OptionKind { Call, Put };

// ---------------------------------------------------------------------------
// Funding and fees
// ---------------------------------------------------------------------------

enum class FundingMode { None, ConstantRate };

// Exogenous funding: `rate` is the fraction exchanged per `interval_days`.
// Positive funding debits longs and credits shorts.
struct FundingConfig {
    FundingMode mode = FundingMode::None;
    double rate = 0.0;
    double interval_days = 1.0;

    // Accrued fraction of notional over a step of dt days (unsigned).
    double accrual_per_step(double dt) const noexcept {
        if (mode == FundingMode::None) return 0.0;
        return rate * (dt / interval_days);
    }
};

struct FeeSchedule {
    double open_fee_rate = 0.0;             // fraction of notional at entry
    double close_fee_rate = 0.0;            // fraction of notional at exit
    double borrow_rate_per_step = 0.0;      // fraction of notional per step
    double entry_slippage = 0.0;            // fraction, executes against the trader
    double maintenance_margin_rate = 0.0;   // r_m
};

// ---------------------------------------------------------------------------
// Contract tuples
// ---------------------------------------------------------------------------

// Perpetual future  <U, C, L, S, P_entry, F_m>
struct PerpetualSpec {
    AssetRef underlying;
    AssetRef collateral_asset;
    double collateral_amount = 0.0;       // C0
    double leverage = 1.0;                // L
    Side side = Side::Long;               // S
    double entry_reference_price = 0.0;   // P_entry
    FundingConfig funding;                // F_m
};

// Expiring option  <U, C, L, S, P_strike, T_expiry>
struct ExpiringOptionSpec {
    AssetRef underlying;
    AssetRef collateral_asset;
    double leverage = 1.0;        // carried but inert for payoff math
    OptionKind side = OptionKind::Call;
    double strike = 0.0;          // P_strike
    double expiry_days = 0.0;     // T_expiry, offset from open
    double contracts = 1.0;       // n
    double multiplier = 1.0;      // kappa
    double premium = 0.0;         // pi, per contract
};

// Everlasting option  <U, C, L, S, P_strike, F_m>
struct EverlastingOptionSpec {
    AssetRef underlying;
    AssetRef collateral_asset;
    double leverage = 1.0;
    OptionKind side = OptionKind::Call;
    double strike = 0.0;
    double contracts = 1.0;
    double multiplier = 1.0;
    double premium = 0.0;
    FundingConfig funding;
};

// Synthetic asset CDP thresholds  <U, C, P_U, P_C>; the two prices are
// runtime inputs fed by the path engine, not stored parameters.
struct SyntheticSpec {
    AssetRef underlying;
    AssetRef collateral_asset;
    double cr_min = 1.5;               // CR_min, required at mint
    double cr_liq = 1.2;               // CR_liq, liquidation trigger
    double cr_target = 1.8;            // post-liquidation target
    double liquidation_penalty = 0.1;  // proportional seize bonus
};

using ContractSpec =
    std::variant<PerpetualSpec, ExpiringOptionSpec, EverlastingOptionSpec, SyntheticSpec>;

struct ProtocolPreset {
    std::string name;
    FeeSchedule fee_schedule;
    FundingConfig funding;
    double max_leverage = 1.0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate(const AssetRef& asset, const std::string& field);
void validate(const FundingConfig& funding, const std::string& field);
void validate(const FeeSchedule& fees, const std::string& field);
void validate(const PerpetualSpec& spec);
void validate(const ExpiringOptionSpec& spec);
void validate(const EverlastingOptionSpec& spec);
void validate(const SyntheticSpec& spec);
void validate(const ProtocolPreset& preset);

// Returns the spec unchanged iff every invariant holds; otherwise throws
// InvalidSpec naming the first violated field. Idempotent.
ContractSpec validate_spec(const ContractSpec& spec);

// ---------------------------------------------------------------------------
// Preset registry
// ---------------------------------------------------------------------------

// Looks up a named parameter bundle; throws UnknownPreset on a miss.
ProtocolPreset load_preset(const std::string& name);
std::vector<std::string> preset_names();

// ---------------------------------------------------------------------------
// JSON (field names match the struct fields verbatim)
// ---------------------------------------------------------------------------

std::string to_string(AssetCategory category);
std::string to_string(Side side);
std::string to_string(OptionKind kind);
std::string to_string(FundingMode mode);

AssetCategory asset_category_from_string(const std::string& s);
Side side_from_string(const std::string& s);
OptionKind option_kind_from_string(const std::string& s);
FundingMode funding_mode_from_string(const std::string& s);

json to_json(const AssetRef& v);
json to_json(const FundingConfig& v);
json to_json(const FeeSchedule& v);
json to_json(const PerpetualSpec& v);
json to_json(const ExpiringOptionSpec& v);
json to_json(const EverlastingOptionSpec& v);
json to_json(const SyntheticSpec& v);
json to_json(const ContractSpec& v);
json to_json(const ProtocolPreset& v);

AssetRef asset_ref_from_json(const json& j);
FundingConfig funding_config_from_json(const json& j);
FeeSchedule fee_schedule_from_json(const json& j);
ContractSpec contract_spec_from_json(const json& j);
ProtocolPreset protocol_preset_from_json(const json& j);

}  // namespace derivsim
