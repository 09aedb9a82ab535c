#include <cmath>
#include <set>

#include "doctest.h"

#include "derivsim/core.hpp"
#include "derivsim/rng.hpp"

using namespace derivsim;

namespace {

PerpetualSpec sample_perp() {
    PerpetualSpec spec;
    spec.underlying = {"SOL", AssetCategory::L1};
    spec.collateral_asset = {"USDC", AssetCategory::Stable};
    spec.collateral_amount = 1000.0;
    spec.leverage = 10.0;
    spec.side = Side::Long;
    spec.entry_reference_price = 100.0;
    return spec;
}

SyntheticSpec sample_synth() {
    SyntheticSpec spec;
    spec.underlying = {"sUSD", AssetCategory::Stable};
    spec.collateral_asset = {"ETH", AssetCategory::L1};
    spec.cr_min = 1.5;
    spec.cr_liq = 1.45;
    spec.cr_target = 1.6;
    spec.liquidation_penalty = 0.1;
    return spec;
}

// Random valid contract of any of the four kinds.
ContractSpec random_contract(rng::Stream& gen) {
    const int kind = static_cast<int>(gen.next_range(0.0, 4.0));
    AssetRef under{"U" + std::to_string(gen.next_word() % 1000), AssetCategory::L1};
    AssetRef coll{"C" + std::to_string(gen.next_word() % 1000), AssetCategory::Stable};
    if (kind == 0) {
        PerpetualSpec spec;
        spec.underlying = under;
        spec.collateral_asset = coll;
        spec.collateral_amount = gen.next_range(1.0, 1e5);
        spec.leverage = gen.next_range(1.0, 100.0);
        spec.side = gen.next_uniform() < 0.5 ? Side::Long : Side::Short;
        spec.entry_reference_price = gen.next_range(0.01, 1e4);
        if (gen.next_uniform() < 0.5)
            spec.funding = {FundingMode::ConstantRate, gen.next_range(-0.01, 0.01),
                            gen.next_range(0.01, 2.0)};
        return spec;
    }
    if (kind == 1) {
        ExpiringOptionSpec spec;
        spec.underlying = under;
        spec.collateral_asset = coll;
        spec.leverage = gen.next_range(1.0, 20.0);
        spec.side = gen.next_uniform() < 0.5 ? OptionKind::Call : OptionKind::Put;
        spec.strike = gen.next_range(0.1, 1e4);
        spec.expiry_days = gen.next_range(0.1, 30.0);
        spec.contracts = std::floor(gen.next_range(1.0, 50.0));
        spec.multiplier = gen.next_range(0.1, 10.0);
        spec.premium = gen.next_range(0.0, 100.0);
        return spec;
    }
    if (kind == 2) {
        EverlastingOptionSpec spec;
        spec.underlying = under;
        spec.collateral_asset = coll;
        spec.leverage = gen.next_range(1.0, 20.0);
        spec.side = gen.next_uniform() < 0.5 ? OptionKind::Call : OptionKind::Put;
        spec.strike = gen.next_range(0.1, 1e4);
        spec.contracts = std::floor(gen.next_range(1.0, 50.0));
        spec.multiplier = gen.next_range(0.1, 10.0);
        spec.premium = gen.next_range(0.0, 100.0);
        if (gen.next_uniform() < 0.5)
            spec.funding = {FundingMode::ConstantRate, gen.next_range(-0.01, 0.01),
                            gen.next_range(0.01, 2.0)};
        return spec;
    }
    SyntheticSpec spec;
    spec.underlying = under;
    spec.collateral_asset = coll;
    spec.cr_liq = gen.next_range(1.01, 2.0);
    spec.cr_min = spec.cr_liq + gen.next_range(0.0, 0.5);
    spec.cr_target = spec.cr_min + gen.next_range(0.01, 0.5);
    spec.liquidation_penalty = gen.next_range(0.0, 0.999) * (spec.cr_target - 1.0);
    return spec;
}

}  // namespace

TEST_CASE("validate_spec accepts a plain perpetual") {
    const ContractSpec spec = sample_perp();
    CHECK_NOTHROW(validate_spec(spec));
}

TEST_CASE("validate_spec rejects sub-unit leverage") {
    PerpetualSpec spec = sample_perp();
    spec.leverage = 0.5;
    try {
        validate_spec(spec);
        FAIL("expected InvalidSpec");
    } catch (const InvalidSpec& e) {
        CHECK(e.field == "leverage");
    }
}

TEST_CASE("validate_spec rejects inverted CR ordering") {
    SyntheticSpec spec = sample_synth();
    spec.cr_min = 1.5;
    spec.cr_liq = 1.6;
    try {
        validate_spec(spec);
        FAIL("expected InvalidSpec");
    } catch (const InvalidSpec& e) {
        CHECK(e.field == "cr_min");
    }
}

TEST_CASE("validate_spec flags remaining invariant edges") {
    {
        PerpetualSpec spec = sample_perp();
        spec.entry_reference_price = 0.0;
        CHECK_THROWS_AS(validate_spec(ContractSpec{spec}), InvalidSpec);
    }
    {
        PerpetualSpec spec = sample_perp();
        spec.collateral_amount = 0.0;
        CHECK_THROWS_AS(validate_spec(ContractSpec{spec}), InvalidSpec);
    }
    {
        PerpetualSpec spec = sample_perp();
        spec.funding = {FundingMode::None, 0.001, 1.0};  // rate must be 0 for None
        CHECK_THROWS_AS(validate_spec(ContractSpec{spec}), InvalidSpec);
    }
    {
        SyntheticSpec spec = sample_synth();
        spec.liquidation_penalty = spec.cr_target - 1.0;  // denominator would vanish
        CHECK_THROWS_AS(validate_spec(ContractSpec{spec}), InvalidSpec);
    }
    {
        ExpiringOptionSpec spec;
        spec.underlying = {"ETH", AssetCategory::L1};
        spec.collateral_asset = {"USDC", AssetCategory::Stable};
        spec.strike = 100.0;
        spec.expiry_days = 0.0;
        CHECK_THROWS_AS(validate_spec(ContractSpec{spec}), InvalidSpec);
    }
}

TEST_CASE("validation is idempotent") {
    rng::Stream gen(101);
    for (int i = 0; i < 200; ++i) {
        const ContractSpec spec = random_contract(gen);
        const ContractSpec once = validate_spec(spec);
        CHECK_NOTHROW(validate_spec(once));
    }
}

TEST_CASE("jupiter preset carries the published parameters") {
    const ProtocolPreset preset = load_preset("jupiter");
    CHECK(preset.fee_schedule.open_fee_rate == 0.0006);
    CHECK(preset.fee_schedule.close_fee_rate == 0.0006);
    CHECK(preset.fee_schedule.borrow_rate_per_step == 0.000027);
    CHECK(preset.fee_schedule.entry_slippage == 0.0020);
    CHECK(preset.fee_schedule.maintenance_margin_rate == 0.002556);
    CHECK(preset.funding.mode == FundingMode::None);
}

TEST_CASE("frictionless preset is all zero") {
    const ProtocolPreset preset = load_preset("frictionless");
    CHECK(preset.fee_schedule.open_fee_rate == 0.0);
    CHECK(preset.fee_schedule.close_fee_rate == 0.0);
    CHECK(preset.fee_schedule.borrow_rate_per_step == 0.0);
    CHECK(preset.fee_schedule.entry_slippage == 0.0);
    CHECK(preset.fee_schedule.maintenance_margin_rate == 0.0);
    CHECK(preset.funding.mode == FundingMode::None);
}

TEST_CASE("unknown preset name raises") {
    CHECK_THROWS_AS(load_preset("nonexistent"), UnknownPreset);
}

TEST_CASE("every registered preset is valid and uniquely named") {
    std::set<std::string> names;
    for (const auto& name : preset_names()) {
        CHECK(names.insert(name).second);
        CHECK_NOTHROW(validate(load_preset(name)));
    }
    CHECK(names.count("jupiter") == 1);
    CHECK(names.count("frictionless") == 1);
}

TEST_CASE("contract specs round-trip through JSON") {
    rng::Stream gen(202);
    for (int i = 0; i < 1000; ++i) {
        const ContractSpec spec = validate_spec(random_contract(gen));
        const ContractSpec back = contract_spec_from_json(to_json(spec));
        CHECK(to_json(back) == to_json(spec));
    }
}

TEST_CASE("preset JSON round-trips") {
    for (const auto& name : preset_names()) {
        const ProtocolPreset preset = load_preset(name);
        const ProtocolPreset back = protocol_preset_from_json(to_json(preset));
        CHECK(to_json(back) == to_json(preset));
    }
}

TEST_CASE("malformed JSON fields are named in the error") {
    json j = to_json(ContractSpec{sample_perp()});
    j.erase("leverage");
    CHECK_THROWS_AS(contract_spec_from_json(j), InvalidSpec);
    j["leverage"] = "ten";
    CHECK_THROWS_AS(contract_spec_from_json(j), InvalidSpec);
    j["leverage"] = 10.0;
    j["side"] = "Sideways";
    CHECK_THROWS_AS(contract_spec_from_json(j), InvalidSpec);
}

TEST_CASE("side exposes the numeric sign convention") {
    CHECK(sign_of(Side::Long) == 1.0);
    CHECK(sign_of(Side::Short) == -1.0);
}
