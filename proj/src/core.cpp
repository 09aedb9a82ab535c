#include "derivsim/core.hpp"

#include <cmath>

namespace derivsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& field, const std::string& reason) {
    if (!ok) throw InvalidSpec(field, reason);
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate(const AssetRef& asset, const std::string& field) {
    require(!asset.symbol.empty(), field + ".symbol", "must be non-empty");
}

void validate(const FundingConfig& funding, const std::string& field) {
    require(finite(funding.rate), field + ".rate", "must be finite");
    if (funding.mode == FundingMode::None) {
        require(funding.rate == 0.0, field + ".rate", "must be 0 when mode is None");
    } else {
        require(funding.interval_days > 0.0, field + ".interval_days", "must be > 0");
    }
}

void validate(const FeeSchedule& fees, const std::string& field) {
    require(finite(fees.open_fee_rate) && fees.open_fee_rate >= 0.0,
            field + ".open_fee_rate", "must be >= 0");
    require(finite(fees.close_fee_rate) && fees.close_fee_rate >= 0.0,
            field + ".close_fee_rate", "must be >= 0");
    require(finite(fees.borrow_rate_per_step) && fees.borrow_rate_per_step >= 0.0,
            field + ".borrow_rate_per_step", "must be >= 0");
    require(finite(fees.entry_slippage) && fees.entry_slippage >= 0.0,
            field + ".entry_slippage", "must be >= 0");
    require(finite(fees.maintenance_margin_rate) && fees.maintenance_margin_rate >= 0.0,
            field + ".maintenance_margin_rate", "must be >= 0");
    require(fees.maintenance_margin_rate < 1.0, field + ".maintenance_margin_rate",
            "must be < 1");
}

void validate(const PerpetualSpec& spec) {
    validate(spec.underlying, "underlying");
    validate(spec.collateral_asset, "collateral_asset");
    require(finite(spec.leverage) && spec.leverage >= 1.0, "leverage", "must be >= 1");
    require(finite(spec.entry_reference_price) && spec.entry_reference_price > 0.0,
            "entry_reference_price", "must be > 0");
    require(finite(spec.collateral_amount) && spec.collateral_amount > 0.0,
            "collateral_amount", "must be > 0");
    validate(spec.funding, "funding");
}

namespace {

void validate_option_common(const AssetRef& underlying, const AssetRef& collateral,
                            double leverage, double strike, double contracts,
                            double multiplier, double premium) {
    validate(underlying, "underlying");
    validate(collateral, "collateral_asset");
    require(finite(leverage) && leverage >= 1.0, "leverage", "must be >= 1");
    require(finite(strike) && strike > 0.0, "strike", "must be > 0");
    require(finite(contracts) && contracts >= 1.0, "contracts", "must be >= 1");
    require(finite(multiplier) && multiplier > 0.0, "multiplier", "must be > 0");
    require(finite(premium) && premium >= 0.0, "premium", "must be >= 0");
}

}  // namespace

void validate(const ExpiringOptionSpec& spec) {
    validate_option_common(spec.underlying, spec.collateral_asset, spec.leverage,
                           spec.strike, spec.contracts, spec.multiplier, spec.premium);
    require(finite(spec.expiry_days) && spec.expiry_days > 0.0, "expiry_days", "must be > 0");
}

void validate(const EverlastingOptionSpec& spec) {
    validate_option_common(spec.underlying, spec.collateral_asset, spec.leverage,
                           spec.strike, spec.contracts, spec.multiplier, spec.premium);
    validate(spec.funding, "funding");
}

void validate(const SyntheticSpec& spec) {
    validate(spec.underlying, "underlying");
    validate(spec.collateral_asset, "collateral_asset");
    require(finite(spec.cr_liq) && spec.cr_liq > 1.0, "cr_liq", "must be > 1");
    require(spec.cr_min >= spec.cr_liq, "cr_min", "must be >= cr_liq");
    require(spec.cr_target > spec.cr_min, "cr_target", "must be > cr_min");
    require(finite(spec.liquidation_penalty) && spec.liquidation_penalty >= 0.0,
            "liquidation_penalty", "must be >= 0");
    // Keeps the partial-liquidation sizing denominator strictly positive.
    require(spec.liquidation_penalty < spec.cr_target - 1.0, "liquidation_penalty",
            "must be < cr_target - 1");
}

void validate(const ProtocolPreset& preset) {
    require(!preset.name.empty(), "name", "must be non-empty");
    validate(preset.fee_schedule, "fee_schedule");
    validate(preset.funding, "funding");
    require(finite(preset.max_leverage) && preset.max_leverage >= 1.0, "max_leverage",
            "must be >= 1");
}

ContractSpec validate_spec(const ContractSpec& spec) {
    std::visit([](const auto& s) { validate(s); }, spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Preset registry
// ---------------------------------------------------------------------------

namespace {

// Registered bundles. "jupiter" carries the published simulation parameters;
// "hyperliquid" and "dydx" carry fee-range midpoints and are approximations
// (their live funding is premium-derived, modeled here as mode None with the
// premium formulas exposed as perp-module functions).
const std::vector<ProtocolPreset>& registry() {
    static const std::vector<ProtocolPreset> presets = {
        ProtocolPreset{
            "jupiter",
            FeeSchedule{0.0006, 0.0006, 0.000027, 0.0020, 0.002556},
            FundingConfig{FundingMode::None, 0.0, 1.0},
            100.0,
        },
        ProtocolPreset{
            "frictionless",
            FeeSchedule{0.0, 0.0, 0.0, 0.0, 0.0},
            FundingConfig{FundingMode::None, 0.0, 1.0},
            1000.0,
        },
        ProtocolPreset{
            "hyperliquid",
            // One-off fee midpoint of the 0-0.045% tier schedule; maintenance
            // is half the initial margin at max leverage (0.5/40).
            FeeSchedule{0.000225, 0.000225, 0.0, 0.0, 0.0125},
            FundingConfig{FundingMode::None, 0.0, 1.0},
            40.0,
        },
        ProtocolPreset{
            "dydx",
            // One-off fee midpoint of the 0.025-0.05% tier schedule;
            // maintenance at the most-liquid tier floor.
            FeeSchedule{0.000375, 0.000375, 0.0, 0.0, 0.0005},
            FundingConfig{FundingMode::None, 0.0, 1.0},
            50.0,
        },
    };
    return presets;
}

}  // namespace

ProtocolPreset load_preset(const std::string& name) {
    for (const auto& preset : registry()) {
        if (preset.name == name) return preset;
    }
    throw UnknownPreset(name);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& preset : registry()) names.push_back(preset.name);
    return names;
}

// ---------------------------------------------------------------------------
// Enum <-> string
// ---------------------------------------------------------------------------

std::string to_string(AssetCategory category) {
    switch (category) {
        case AssetCategory::L1: return "L1";
        case AssetCategory::L2: return "L2";
        case AssetCategory::DeFi: return "DeFi";
        case AssetCategory::Meme: return "Meme";
        case AssetCategory::Gaming: return "Gaming";
        case AssetCategory::Forex: return "Forex";
        case AssetCategory::RWA: return "RWA";
        case AssetCategory::Stable: return "Stable";
    }
    return "L1";
}

std::string to_string(Side side) { return side == Side::Long ? "Long" : "Short"; }

std::string to_string(OptionKind kind) { return kind == OptionKind::Call ? "Call" : "Put"; }

std::string to_string(FundingMode mode) {
    return mode == FundingMode::None ? "None" : "ConstantRate";
}

AssetCategory asset_category_from_string(const std::string& s) {
    if (s == "L1") return AssetCategory::L1;
    if (s == "L2") return AssetCategory::L2;
    if (s == "DeFi") return AssetCategory::DeFi;
    if (s == "Meme") return AssetCategory::Meme;
    if (s == "Gaming") return AssetCategory::Gaming;
    if (s == "Forex") return AssetCategory::Forex;
    if (s == "RWA") return AssetCategory::RWA;
    if (s == "Stable") return AssetCategory::Stable;
    throw InvalidSpec("category", "unknown value '" + s + "'");
}

Side side_from_string(const std::string& s) {
    if (s == "Long") return Side::Long;
    if (s == "Short") return Side::Short;
    throw InvalidSpec("side", "unknown value '" + s + "'");
}

OptionKind option_kind_from_string(const std::string& s) {
    if (s == "Call") return OptionKind::Call;
    if (s == "Put") return OptionKind::Put;
    throw InvalidSpec("side", "unknown value '" + s + "'");
}

FundingMode funding_mode_from_string(const std::string& s) {
    if (s == "None") return FundingMode::None;
    if (s == "ConstantRate") return FundingMode::ConstantRate;
    throw InvalidSpec("funding.mode", "unknown value '" + s + "'");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json to_json(const AssetRef& v) {
    return json{{"symbol", v.symbol}, {"category", to_string(v.category)}};
}

json to_json(const FundingConfig& v) {
    return json{{"mode", to_string(v.mode)}, {"rate", v.rate},
                {"interval_days", v.interval_days}};
}

json to_json(const FeeSchedule& v) {
    return json{{"open_fee_rate", v.open_fee_rate},
                {"close_fee_rate", v.close_fee_rate},
                {"borrow_rate_per_step", v.borrow_rate_per_step},
                {"entry_slippage", v.entry_slippage},
                {"maintenance_margin_rate", v.maintenance_margin_rate}};
}

json to_json(const PerpetualSpec& v) {
    return json{{"type", "perpetual"},
                {"underlying", to_json(v.underlying)},
                {"collateral_asset", to_json(v.collateral_asset)},
                {"collateral_amount", v.collateral_amount},
                {"leverage", v.leverage},
                {"side", to_string(v.side)},
                {"entry_reference_price", v.entry_reference_price},
                {"funding", to_json(v.funding)}};
}

json to_json(const ExpiringOptionSpec& v) {
    return json{{"type", "expiring_option"},
                {"underlying", to_json(v.underlying)},
                {"collateral_asset", to_json(v.collateral_asset)},
                {"leverage", v.leverage},
                {"side", to_string(v.side)},
                {"strike", v.strike},
                {"expiry_days", v.expiry_days},
                {"contracts", v.contracts},
                {"multiplier", v.multiplier},
                {"premium", v.premium}};
}

json to_json(const EverlastingOptionSpec& v) {
    return json{{"type", "everlasting_option"},
                {"underlying", to_json(v.underlying)},
                {"collateral_asset", to_json(v.collateral_asset)},
                {"leverage", v.leverage},
                {"side", to_string(v.side)},
                {"strike", v.strike},
                {"contracts", v.contracts},
                {"multiplier", v.multiplier},
                {"premium", v.premium},
                {"funding", to_json(v.funding)}};
}

json to_json(const SyntheticSpec& v) {
    return json{{"type", "synthetic"},
                {"underlying", to_json(v.underlying)},
                {"collateral_asset", to_json(v.collateral_asset)},
                {"cr_min", v.cr_min},
                {"cr_liq", v.cr_liq},
                {"cr_target", v.cr_target},
                {"liquidation_penalty", v.liquidation_penalty}};
}

json to_json(const ContractSpec& v) {
    return std::visit([](const auto& s) { return to_json(s); }, v);
}

json to_json(const ProtocolPreset& v) {
    return json{{"name", v.name},
                {"fee_schedule", to_json(v.fee_schedule)},
                {"funding", to_json(v.funding)},
                {"max_leverage", v.max_leverage}};
}

namespace {

const json& member(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidSpec(key, "missing field");
    return *it;
}

double number(const json& j, const char* key) {
    const json& v = member(j, key);
    if (!v.is_number()) throw InvalidSpec(key, "must be a number");
    return v.get<double>();
}

std::string text(const json& j, const char* key) {
    const json& v = member(j, key);
    if (!v.is_string()) throw InvalidSpec(key, "must be a string");
    return v.get<std::string>();
}

}  // namespace

AssetRef asset_ref_from_json(const json& j) {
    return AssetRef{text(j, "symbol"), asset_category_from_string(text(j, "category"))};
}

FundingConfig funding_config_from_json(const json& j) {
    FundingConfig funding;
    funding.mode = funding_mode_from_string(text(j, "mode"));
    funding.rate = number(j, "rate");
    funding.interval_days = j.contains("interval_days") ? number(j, "interval_days") : 1.0;
    return funding;
}

FeeSchedule fee_schedule_from_json(const json& j) {
    FeeSchedule fees;
    fees.open_fee_rate = number(j, "open_fee_rate");
    fees.close_fee_rate = number(j, "close_fee_rate");
    fees.borrow_rate_per_step = number(j, "borrow_rate_per_step");
    fees.entry_slippage = number(j, "entry_slippage");
    fees.maintenance_margin_rate = number(j, "maintenance_margin_rate");
    return fees;
}

ContractSpec contract_spec_from_json(const json& j) {
    const std::string type = text(j, "type");
    if (type == "perpetual") {
        PerpetualSpec spec;
        spec.underlying = asset_ref_from_json(member(j, "underlying"));
        spec.collateral_asset = asset_ref_from_json(member(j, "collateral_asset"));
        spec.collateral_amount = number(j, "collateral_amount");
        spec.leverage = number(j, "leverage");
        spec.side = side_from_string(text(j, "side"));
        spec.entry_reference_price = number(j, "entry_reference_price");
        if (j.contains("funding")) spec.funding = funding_config_from_json(member(j, "funding"));
        return spec;
    }
    if (type == "expiring_option") {
        ExpiringOptionSpec spec;
        spec.underlying = asset_ref_from_json(member(j, "underlying"));
        spec.collateral_asset = asset_ref_from_json(member(j, "collateral_asset"));
        spec.leverage = number(j, "leverage");
        spec.side = option_kind_from_string(text(j, "side"));
        spec.strike = number(j, "strike");
        spec.expiry_days = number(j, "expiry_days");
        spec.contracts = number(j, "contracts");
        spec.multiplier = number(j, "multiplier");
        spec.premium = number(j, "premium");
        return spec;
    }
    if (type == "everlasting_option") {
        EverlastingOptionSpec spec;
        spec.underlying = asset_ref_from_json(member(j, "underlying"));
        spec.collateral_asset = asset_ref_from_json(member(j, "collateral_asset"));
        spec.leverage = number(j, "leverage");
        spec.side = option_kind_from_string(text(j, "side"));
        spec.strike = number(j, "strike");
        spec.contracts = number(j, "contracts");
        spec.multiplier = number(j, "multiplier");
        spec.premium = number(j, "premium");
        if (j.contains("funding")) spec.funding = funding_config_from_json(member(j, "funding"));
        return spec;
    }
    if (type == "synthetic") {
        SyntheticSpec spec;
        spec.underlying = asset_ref_from_json(member(j, "underlying"));
        spec.collateral_asset = asset_ref_from_json(member(j, "collateral_asset"));
        spec.cr_min = number(j, "cr_min");
        spec.cr_liq = number(j, "cr_liq");
        spec.cr_target = number(j, "cr_target");
        spec.liquidation_penalty = number(j, "liquidation_penalty");
        return spec;
    }
    throw InvalidSpec("type", "unknown contract type '" + type + "'");
}

ProtocolPreset protocol_preset_from_json(const json& j) {
    ProtocolPreset preset;
    preset.name = text(j, "name");
    preset.fee_schedule = fee_schedule_from_json(member(j, "fee_schedule"));
    if (j.contains("funding")) preset.funding = funding_config_from_json(member(j, "funding"));
    preset.max_leverage = j.contains("max_leverage") ? number(j, "max_leverage") : 1.0;
    return preset;
}

}  // namespace derivsim
