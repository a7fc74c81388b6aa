#include "hrng/system_config.hpp"

#include "hrng/error.hpp"
#include "hrng/group.hpp"

#include <nlohmann/json.hpp>

#include <map>

namespace hrng {

using nlohmann::json;

const char* to_string(AggregationMethod m) {
    return m == AggregationMethod::Xor ? "XOR" : "SUM_MOD_P";
}

AggregationMethod aggregation_from_string(const std::string& s) {
    if (s == "XOR") {
        return AggregationMethod::Xor;
    }
    if (s == "SUM_MOD_P") {
        return AggregationMethod::SumModP;
    }
    throw Error(ErrorCode::ParseError, "unknown aggregation method: " + s);
}

const char* to_string(DeviceStrategy s) {
    switch (s) {
    case DeviceStrategy::Honest:
        return "HONEST";
    case DeviceStrategy::BiasedOutput:
        return "BIASED_OUTPUT";
    case DeviceStrategy::DiscardUnfavored:
        return "DISCARD_UNFAVORED";
    }
    return "?";
}

const char* to_string(GatewayStrategy s) {
    return s == GatewayStrategy::Honest ? "HONEST" : "REFUSE_REVEAL";
}

const char* to_string(DappStrategy s) {
    return s == DappStrategy::HonestSelection ? "HONEST_SELECTION" : "COLLUDER_ONLY_SELECTION";
}

const char* to_string(DiscardRule r) {
    switch (r) {
    case DiscardRule::AllKept:
        return "ALL_KEPT";
    case DiscardRule::LowBitMatch:
        return "LOW_BIT_MATCH";
    case DiscardRule::NoneKept:
        return "NONE_KEPT";
    }
    return "?";
}

DeviceStrategy device_strategy_from_string(const std::string& s) {
    if (s == "HONEST") {
        return DeviceStrategy::Honest;
    }
    if (s == "BIASED_OUTPUT") {
        return DeviceStrategy::BiasedOutput;
    }
    if (s == "DISCARD_UNFAVORED") {
        return DeviceStrategy::DiscardUnfavored;
    }
    throw Error(ErrorCode::ParseError, "unknown device strategy: " + s);
}

GatewayStrategy gateway_strategy_from_string(const std::string& s) {
    if (s == "HONEST") {
        return GatewayStrategy::Honest;
    }
    if (s == "REFUSE_REVEAL") {
        return GatewayStrategy::RefuseReveal;
    }
    throw Error(ErrorCode::ParseError, "unknown gateway strategy: " + s);
}

DappStrategy dapp_strategy_from_string(const std::string& s) {
    if (s == "HONEST_SELECTION") {
        return DappStrategy::HonestSelection;
    }
    if (s == "COLLUDER_ONLY_SELECTION") {
        return DappStrategy::ColluderOnlySelection;
    }
    throw Error(ErrorCode::ParseError, "unknown dapp strategy: " + s);
}

DiscardRule discard_rule_from_string(const std::string& s) {
    if (s == "ALL_KEPT") {
        return DiscardRule::AllKept;
    }
    if (s == "LOW_BIT_MATCH") {
        return DiscardRule::LowBitMatch;
    }
    if (s == "NONE_KEPT") {
        return DiscardRule::NoneKept;
    }
    throw Error(ErrorCode::ParseError, "unknown discard rule: " + s);
}

namespace {

[[noreturn]] void bad_config(const std::string& rule) {
    throw Error(ErrorCode::InvalidConfig, rule);
}

} // namespace

void validate(const SystemConfig& config) {
    if (config.n_g < 1 || config.n_i < 1 || config.n_r < 1) {
        bad_config("participant counts must be at least 1");
    }
    if (config.entropy_bits < 1) {
        bad_config("entropy_bits must be at least 1");
    }
    if (config.n_mg >= config.n_g) {
        bad_config("n_mg must be smaller than n_g");
    }
    if (config.n_mi >= config.n_i) {
        bad_config("n_mi must be smaller than n_i");
    }
    if (config.t <= config.n_mg) {
        bad_config("t must exceed n_mg, otherwise compromised gateways reconstruct alone");
    }
    if (config.t > config.n_g - config.n_mg) {
        bad_config("t must not exceed n_g - n_mg, otherwise honest gateways cannot reconstruct");
    }
    if (config.k != config.n_g) {
        bad_config("k must equal n_g, one share per gateway");
    }
    if (config.ell < config.n_mg + 1) {
        bad_config("ell must be at least n_mg + 1 so an honest entry is always selected");
    }
    auto group = make_group(config.group_name); // throws ParseError for unknown names
    if (BigInt(config.k) >= group->order()) {
        bad_config("k must be smaller than the group order");
    }
    const std::size_t min_bits = ceil_log2(group->order()) + config.scalar_margin;
    if (config.entropy_bits < min_bits) {
        bad_config("entropy_bits must be at least ceil(log2 p) + scalar_margin = " + std::to_string(min_bits));
    }
}

void validate(const AdversarySpec& adversary, const SystemConfig& config) {
    for (std::uint32_t g : adversary.compromised_gateways) {
        if (g < 1 || g > config.n_g) {
            throw Error(ErrorCode::InvalidAdversary, "compromised gateway id " + std::to_string(g) +
                                                         " out of range [1, " + std::to_string(config.n_g) + "]");
        }
    }
    std::map<std::uint32_t, std::uint32_t> per_gateway;
    for (auto [g, d] : adversary.compromised_devices) {
        if (g < 1 || g > config.n_g || d < 1 || d > config.n_i) {
            throw Error(ErrorCode::InvalidAdversary, "compromised device (" + std::to_string(g) + ", " +
                                                         std::to_string(d) + ") out of range");
        }
        ++per_gateway[g];
    }
    if (adversary.target_value < 0) {
        throw Error(ErrorCode::InvalidAdversary, "target_value must be non-negative");
    }
    if (adversary.allow_assumption_violation) {
        return;
    }
    if (adversary.compromised_gateways.size() > config.n_mg) {
        throw Error(ErrorCode::InvalidAdversary,
                    "more compromised gateways than n_mg = " + std::to_string(config.n_mg));
    }
    for (auto [g, count] : per_gateway) {
        if (count > config.n_mi) {
            throw Error(ErrorCode::InvalidAdversary, "gateway " + std::to_string(g) +
                                                         " has more compromised devices than n_mi = " +
                                                         std::to_string(config.n_mi));
        }
    }
}

namespace {

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw Error(ErrorCode::ParseError, std::string("missing config key: ") + key);
    }
    return *it;
}

template <typename T> T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

} // namespace

json to_json(const SystemConfig& config) {
    return json{{"n_g", config.n_g},
                {"n_i", config.n_i},
                {"n_r", config.n_r},
                {"n_mg", config.n_mg},
                {"n_mi", config.n_mi},
                {"t", config.t},
                {"k", config.k},
                {"ell", config.ell},
                {"group", config.group_name},
                {"entropy_bits", config.entropy_bits},
                {"scalar_margin", config.scalar_margin},
                {"seed", config.seed},
                {"aggregation", to_string(config.aggregation)},
                {"gas_schedule",
                 json{{"addmod", config.gas_schedule.addmod_cost},
                      {"mulmod", config.gas_schedule.mulmod_cost},
                      {"ecadd", config.gas_schedule.ecadd_cost},
                      {"ecmul", config.gas_schedule.ecmul_cost}}}};
}

SystemConfig config_from_json(const json& j) {
    SystemConfig config;
    try {
        config.n_g = require(j, "n_g").get<std::uint32_t>();
        config.n_i = require(j, "n_i").get<std::uint32_t>();
        config.n_r = require(j, "n_r").get<std::uint32_t>();
        config.n_mg = require(j, "n_mg").get<std::uint32_t>();
        config.n_mi = require(j, "n_mi").get<std::uint32_t>();
        config.t = require(j, "t").get<std::uint32_t>();
        config.k = require(j, "k").get<std::uint32_t>();
        config.ell = require(j, "ell").get<std::uint32_t>();
        config.group_name = require(j, "group").get<std::string>();
        config.entropy_bits = require(j, "entropy_bits").get<std::uint32_t>();
        config.scalar_margin = get_or<std::size_t>(j, "scalar_margin", kDefaultScalarMargin);
        config.seed = require(j, "seed").get<std::uint64_t>();
        config.aggregation = aggregation_from_string(get_or<std::string>(j, "aggregation", "XOR"));
        if (j.contains("gas_schedule")) {
            const json& g = j.at("gas_schedule");
            config.gas_schedule.addmod_cost = get_or<std::uint64_t>(g, "addmod", 8);
            config.gas_schedule.mulmod_cost = get_or<std::uint64_t>(g, "mulmod", 8);
            config.gas_schedule.ecadd_cost = get_or<std::uint64_t>(g, "ecadd", 150);
            config.gas_schedule.ecmul_cost = get_or<std::uint64_t>(g, "ecmul", 6000);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad config value: ") + e.what());
    }
    return config;
}

json to_json(const AdversarySpec& adversary) {
    json devices = json::array();
    for (auto [g, d] : adversary.compromised_devices) {
        devices.push_back(json{{"gateway", g}, {"device", d}});
    }
    json gateways = json::array();
    for (std::uint32_t g : adversary.compromised_gateways) {
        gateways.push_back(g);
    }
    return json{{"compromised_devices", devices},
                {"compromised_gateways", gateways},
                {"device_strategy", to_string(adversary.device_strategy)},
                {"gateway_strategy", to_string(adversary.gateway_strategy)},
                {"dapp_strategy", to_string(adversary.dapp_strategy)},
                {"discard_rule", to_string(adversary.discard_rule)},
                {"target_value", to_dec(adversary.target_value)},
                {"allow_assumption_violation", adversary.allow_assumption_violation},
                {"disable_diversity_check", adversary.disable_diversity_check}};
}

AdversarySpec adversary_from_json(const json& j) {
    AdversarySpec adversary;
    try {
        if (j.contains("compromised_devices")) {
            for (const json& entry : j.at("compromised_devices")) {
                adversary.compromised_devices.insert(
                    {require(entry, "gateway").get<std::uint32_t>(), require(entry, "device").get<std::uint32_t>()});
            }
        }
        if (j.contains("compromised_gateways")) {
            for (const json& g : j.at("compromised_gateways")) {
                adversary.compromised_gateways.insert(g.get<std::uint32_t>());
            }
        }
        adversary.device_strategy = device_strategy_from_string(get_or<std::string>(j, "device_strategy", "HONEST"));
        adversary.gateway_strategy =
            gateway_strategy_from_string(get_or<std::string>(j, "gateway_strategy", "HONEST"));
        adversary.dapp_strategy =
            dapp_strategy_from_string(get_or<std::string>(j, "dapp_strategy", "HONEST_SELECTION"));
        adversary.discard_rule = discard_rule_from_string(get_or<std::string>(j, "discard_rule", "LOW_BIT_MATCH"));
        adversary.target_value = from_dec(get_or<std::string>(j, "target_value", "0"));
        adversary.allow_assumption_violation = get_or<bool>(j, "allow_assumption_violation", false);
        adversary.disable_diversity_check = get_or<bool>(j, "disable_diversity_check", false);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad adversary value: ") + e.what());
    }
    return adversary;
}

} // namespace hrng
