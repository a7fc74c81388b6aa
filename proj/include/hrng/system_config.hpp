#pragma once

#include "hrng/bigint.hpp"
#include "hrng/gas_model.hpp"
#include "hrng/scalar_codec.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace hrng {

enum class AggregationMethod {
    Xor,
    SumModP,
};

const char* to_string(AggregationMethod m);
AggregationMethod aggregation_from_string(const std::string& s);

struct SystemConfig {
    std::uint32_t n_g = 4;  // gateways
    std::uint32_t n_i = 2;  // devices per gateway
    std::uint32_t n_r = 1;  // numbers per device per round
    std::uint32_t n_mg = 1; // tolerated compromised gateways
    std::uint32_t n_mi = 1; // tolerated compromised devices per gateway
    std::uint32_t t = 2;    // share threshold
    std::uint32_t k = 4;    // shares per secret, one per gateway
    std::uint32_t ell = 3;  // entries aggregated per request
    std::string group_name = "ristretto255";
    std::uint32_t entropy_bits = 320;
    std::size_t scalar_margin = kDefaultScalarMargin;
    std::uint64_t seed = 1;
    AggregationMethod aggregation = AggregationMethod::Xor;
    GasSchedule gas_schedule;

    bool operator==(const SystemConfig&) const = default;
};

enum class DeviceStrategy {
    Honest,
    BiasedOutput,
    DiscardUnfavored,
};

enum class GatewayStrategy {
    Honest,
    RefuseReveal,
};

enum class DappStrategy {
    HonestSelection,
    ColluderOnlySelection,
};

// Keep-or-suppress rule for DiscardUnfavored devices.
enum class DiscardRule {
    AllKept,     // keep everything (degenerates to honest)
    LowBitMatch, // keep only outputs whose low bit matches the target's
    NoneKept,    // suppress everything
};

const char* to_string(DeviceStrategy s);
const char* to_string(GatewayStrategy s);
const char* to_string(DappStrategy s);
const char* to_string(DiscardRule r);
DeviceStrategy device_strategy_from_string(const std::string& s);
GatewayStrategy gateway_strategy_from_string(const std::string& s);
DappStrategy dapp_strategy_from_string(const std::string& s);
DiscardRule discard_rule_from_string(const std::string& s);

struct AdversarySpec {
    std::set<std::pair<std::uint32_t, std::uint32_t>> compromised_devices; // (gateway, device)
    std::set<std::uint32_t> compromised_gateways;
    DeviceStrategy device_strategy = DeviceStrategy::Honest;
    GatewayStrategy gateway_strategy = GatewayStrategy::Honest;
    DappStrategy dapp_strategy = DappStrategy::HonestSelection;
    DiscardRule discard_rule = DiscardRule::LowBitMatch;
    BigInt target_value = 0;
    // Lets an experiment exceed the declared n_mg/n_mi bounds to probe what
    // breaks outside the trust assumptions.
    bool allow_assumption_violation = false;
    // Models a sabotaged verifier deployment; only negative controls set it.
    bool disable_diversity_check = false;

    bool operator==(const AdversarySpec&) const = default;
};

// Throws InvalidConfig naming the violated rule.
void validate(const SystemConfig& config);
// Throws InvalidAdversary; bounds are skipped under allow_assumption_violation.
void validate(const AdversarySpec& adversary, const SystemConfig& config);

nlohmann::json to_json(const SystemConfig& config);
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AdversarySpec& adversary);
AdversarySpec adversary_from_json(const nlohmann::json& j);

} // namespace hrng
