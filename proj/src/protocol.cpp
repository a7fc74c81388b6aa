#include "hrng/protocol.hpp"

#include "hrng/capsule.hpp"
#include "hrng/error.hpp"
#include "hrng/hex.hpp"
#include "hrng/scalar_codec.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace hrng {

using nlohmann::json;

DeviceOutput device_generate(Rng& device_rng, const SecretKey& signing_key, std::uint32_t device_id,
                             std::uint32_t entropy_bits) {
    DeviceOutput out;
    out.device_id = device_id;
    out.raw_bits = device_rng.bits(entropy_bits);
    out.signature = sign(signing_key, out.raw_bits.bytes());
    return out;
}

DeviceOutput biased_device_generate(const SecretKey& signing_key, std::uint32_t device_id,
                                    std::uint32_t entropy_bits, const BigInt& target) {
    DeviceOutput out;
    out.device_id = device_id;
    out.raw_bits = BitString::from_bigint(target, entropy_bits);
    out.signature = sign(signing_key, out.raw_bits.bytes());
    return out;
}

std::optional<DeviceOutput> discarding_device_generate(Rng& device_rng, const SecretKey& signing_key,
                                                       std::uint32_t device_id, std::uint32_t entropy_bits,
                                                       DiscardRule rule, const BigInt& target) {
    DeviceOutput out = device_generate(device_rng, signing_key, device_id, entropy_bits);
    switch (rule) {
    case DiscardRule::AllKept:
        return out;
    case DiscardRule::NoneKept:
        return std::nullopt;
    case DiscardRule::LowBitMatch:
        if (out.raw_bits.bit(0) == ((target & 1) != 0)) {
            return out;
        }
        return std::nullopt;
    }
    return out;
}

GatewayProcessed gateway_process_output(const Group& group, const SystemConfig& config, Rng& gateway_rng,
                                        const DeviceOutput& output, const PublicKey& device_key,
                                        std::uint32_t round_id, std::uint32_t gateway_id,
                                        std::uint32_t sequence) {
    GatewayProcessed result;
    if (!verify_sig(device_key, output.raw_bits.bytes(), output.signature)) {
        result.skip_reason = "bad-signature";
        return result;
    }
    result.opening.message = bits_to_scalar(output.raw_bits, group.order(), config.scalar_margin);
    result.opening.blinding = gateway_rng.below(group.order());
    result.commitment = commit(group, result.opening);
    BoxKey capsule_key = derive_capsule_key(result.opening, round_id, gateway_id, output.device_id, sequence);
    result.capsule = seal_capsule(capsule_key, CapsuleContents{output.raw_bits, output.signature});
    result.shares = split(result.opening, config.t, config.k, group.order(), gateway_rng);
    result.accepted = true;
    return result;
}

namespace {

BoxNonce envelope_nonce(std::uint64_t entry_id, std::uint32_t recipient_gateway) {
    std::string material =
        "hrng/envelope/v1|" + std::to_string(entry_id) + "|" + std::to_string(recipient_gateway);
    Digest d = blake2b256(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(material.data()), material.size()));
    BoxNonce nonce{};
    std::copy_n(d.begin(), nonce.size(), nonce.begin());
    return nonce;
}

} // namespace

std::vector<std::uint8_t> seal_share_envelope(const BoxKey& recipient_key, std::uint64_t entry_id,
                                              std::uint32_t recipient_gateway, const Share& share) {
    json plain{{"index", share.index},
               {"message_part", to_dec(share.message_part)},
               {"blinding_part", to_dec(share.blinding_part)}};
    std::string text = plain.dump();
    return box_seal(recipient_key, envelope_nonce(entry_id, recipient_gateway),
                    std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Share open_share_envelope(const BoxKey& recipient_key, std::uint64_t entry_id, std::uint32_t recipient_gateway,
                          std::span<const std::uint8_t> ciphertext) {
    auto plain = box_open(recipient_key, envelope_nonce(entry_id, recipient_gateway), ciphertext);
    if (!plain) {
        throw Error(ErrorCode::ParseError, "share envelope for entry " + std::to_string(entry_id) +
                                               " does not authenticate for gateway " +
                                               std::to_string(recipient_gateway));
    }
    json j;
    try {
        j = json::parse(plain->begin(), plain->end());
        Share share;
        share.index = j.at("index").get<std::uint32_t>();
        share.message_part = from_dec(j.at("message_part").get<std::string>());
        share.blinding_part = from_dec(j.at("blinding_part").get<std::string>());
        if (share.index != recipient_gateway) {
            throw Error(ErrorCode::ParseError, "share envelope carries index " + std::to_string(share.index) +
                                                   " for gateway " + std::to_string(recipient_gateway));
        }
        return share;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed share envelope: ") + e.what());
    }
}

RandomRequest build_request(const Pool& pool, const SystemConfig& config, std::uint32_t round_id,
                            DappStrategy strategy, const std::set<std::uint32_t>& colluding_gateways) {
    std::vector<PoolEntry> entries = pool.query(round_id);
    if (entries.size() < config.ell) {
        throw Error(ErrorCode::InsufficientPool, "pool has " + std::to_string(entries.size()) +
                                                     " entries, request needs " + std::to_string(config.ell));
    }

    RandomRequest request;
    request.request_id = 1;
    request.round_id = round_id;
    request.aggregation_method = config.aggregation;
    request.requester = "dapp";

    if (strategy == DappStrategy::ColluderOnlySelection) {
        for (const PoolEntry& e : entries) {
            if (request.selected_entries.size() == config.ell) {
                break;
            }
            if (colluding_gateways.count(e.gateway_id) != 0) {
                request.selected_entries.push_back(e.entry_id);
            }
        }
        for (const PoolEntry& e : entries) {
            if (request.selected_entries.size() == config.ell) {
                break;
            }
            if (colluding_gateways.count(e.gateway_id) == 0) {
                request.selected_entries.push_back(e.entry_id);
            }
        }
        return request;
    }

    // Round-robin across gateways in publication order.
    std::map<std::uint32_t, std::vector<std::uint64_t>> per_gateway;
    for (const PoolEntry& e : entries) {
        per_gateway[e.gateway_id].push_back(e.entry_id);
    }
    for (std::size_t pass = 0; request.selected_entries.size() < config.ell; ++pass) {
        bool took_any = false;
        for (auto& [gateway_id, ids] : per_gateway) {
            if (pass < ids.size()) {
                request.selected_entries.push_back(ids[pass]);
                took_any = true;
                if (request.selected_entries.size() == config.ell) {
                    break;
                }
            }
        }
        if (!took_any) {
            break; // unreachable: total entries >= ell was checked above
        }
    }
    return request;
}

namespace {

struct DeviceCtx {
    KeyPair keys;
    Rng rng;
};

json counters_json(const ProtocolCounters& c) {
    return json{{"commit_ops", c.commit_ops},
                {"split_ops", c.split_ops},
                {"reconstruct_ops", c.reconstruct_ops},
                {"device_messages", c.device_messages},
                {"envelope_messages", c.envelope_messages},
                {"request_messages", c.request_messages},
                {"reveal_messages", c.reveal_messages}};
}

json ops_json(const OpCounts& ops) {
    return json{{"ecadd", ops.ecadd}, {"ecmul", ops.ecmul}, {"addmod", ops.addmod}, {"mulmod", ops.mulmod}};
}

json share_json(std::uint32_t gateway_id, const Share& share) {
    return json{{"gateway", gateway_id},
                {"index", share.index},
                {"message_part", to_dec(share.message_part)},
                {"blinding_part", to_dec(share.blinding_part)}};
}

} // namespace

RoundResult run_round(const SystemConfig& config, const AdversarySpec& adversary) {
    validate(config);
    validate(adversary, config);

    auto group_ptr = make_group(config.group_name);
    const Group& group = *group_ptr;
    const BigInt& p = group.order();
    const std::uint32_t round_id = 1;

    Rng root(config.seed);
    RoundResult result;
    Transcript& ts = result.transcript;
    ProtocolCounters& counters = result.counters;

    // SETUP: provision signing keys, per-gateway envelope keys, seed streams.
    DeviceKeyRegistry registry(config.n_g, config.n_i);
    std::vector<DeviceCtx> devices;
    devices.reserve(static_cast<std::size_t>(config.n_g) * config.n_i);
    json device_key_list = json::array();
    for (std::uint32_t g = 1; g <= config.n_g; ++g) {
        for (std::uint32_t d = 1; d <= config.n_i; ++d) {
            std::string label = std::to_string(g) + "/" + std::to_string(d);
            std::array<std::uint8_t, 32> seed{};
            root.stream("device-key/" + label).fill(seed.data(), seed.size());
            DeviceCtx ctx{keygen_from_seed(seed), root.stream("device/" + label)};
            registry.set(g, d, ctx.keys.public_key);
            device_key_list.push_back(
                json{{"gateway", g}, {"device", d}, {"key", to_hex(ctx.keys.public_key.data)}});
            devices.push_back(std::move(ctx));
        }
    }
    std::vector<BoxKey> box_keys(config.n_g + 1);
    std::vector<Rng> gateway_rngs;
    gateway_rngs.reserve(config.n_g);
    for (std::uint32_t g = 1; g <= config.n_g; ++g) {
        root.stream("gateway-box/" + std::to_string(g)).fill(box_keys[g].data(), box_keys[g].size());
        gateway_rngs.push_back(root.stream("gateway/" + std::to_string(g)));
    }

    ts.append(Phase::Setup, "orchestrator", kind::kHeader,
              json{{"config", to_json(config)},
                   {"adversary", to_json(adversary)},
                   {"round", round_id},
                   {"group",
                    json{{"name", config.group_name},
                         {"order", to_dec(p)},
                         {"g", group.g().to_hex()},
                         {"h", group.h().to_hex()}}},
                   {"device_keys", device_key_list}});

    Pool pool;
    pool.advance_phase(round_id, Phase::Publish);
    ts.append(Phase::Publish, "orchestrator", kind::kPhaseAdvance, json{{"round", round_id}, {"to", "PUBLISH"}});

    // PUBLISH: devices emit, gateways commit, split, and deposit envelopes.
    for (std::uint32_t g = 1; g <= config.n_g; ++g) {
        Rng& gateway_rng = gateway_rngs[g - 1];
        for (std::uint32_t d = 1; d <= config.n_i; ++d) {
            DeviceCtx& device = devices[(g - 1) * static_cast<std::size_t>(config.n_i) + (d - 1)];
            const bool compromised = adversary.compromised_devices.count({g, d}) != 0;
            for (std::uint32_t seq = 1; seq <= config.n_r; ++seq) {
                std::optional<DeviceOutput> output;
                if (compromised && adversary.device_strategy == DeviceStrategy::BiasedOutput) {
                    output = biased_device_generate(device.keys.secret_key, d, config.entropy_bits,
                                                    adversary.target_value);
                } else if (compromised && adversary.device_strategy == DeviceStrategy::DiscardUnfavored) {
                    output = discarding_device_generate(device.rng, device.keys.secret_key, d,
                                                        config.entropy_bits, adversary.discard_rule,
                                                        adversary.target_value);
                } else {
                    output = device_generate(device.rng, device.keys.secret_key, d, config.entropy_bits);
                }
                if (!output) {
                    continue; // suppressed before anything left the device
                }
                ++counters.device_messages;

                GatewayProcessed processed = gateway_process_output(group, config, gateway_rng, *output,
                                                                    registry.get(g, d), round_id, g, seq);
                if (!processed.accepted) {
                    ts.append(Phase::Publish, "gateway:" + std::to_string(g), kind::kSkippedOutput,
                              json{{"round", round_id},
                                   {"gateway", g},
                                   {"device", d},
                                   {"sequence", seq},
                                   {"reason", processed.skip_reason}});
                    continue;
                }
                ++counters.commit_ops;
                ++counters.split_ops;

                PoolEntry entry;
                entry.round_id = round_id;
                entry.gateway_id = g;
                entry.device_id = d;
                entry.sequence = seq;
                entry.commitment = processed.commitment;
                entry.bits_capsule = processed.capsule;
                std::uint64_t entry_id = pool.publish(std::move(entry));
                const PoolEntry& published = pool.get(entry_id);
                ts.append(Phase::Publish, "gateway:" + std::to_string(g), kind::kPublish,
                          json{{"entry_id", entry_id},
                               {"round", round_id},
                               {"gateway", g},
                               {"device", d},
                               {"sequence", seq},
                               {"commitment", published.commitment.element.to_hex()},
                               {"capsule", to_hex(published.bits_capsule)},
                               {"published_at", published.published_at}});

                for (std::uint32_t recipient = 1; recipient <= config.k; ++recipient) {
                    ShareEnvelope env;
                    env.entry_id = entry_id;
                    env.recipient_gateway = recipient;
                    env.ciphertext = seal_share_envelope(box_keys[recipient], entry_id, recipient,
                                                         processed.shares.shares[recipient - 1]);
                    ts.append(Phase::Publish, "gateway:" + std::to_string(g), kind::kEnvelope,
                              json{{"entry_id", entry_id},
                                   {"recipient", recipient},
                                   {"ciphertext", to_hex(env.ciphertext)}});
                    pool.deposit_share(std::move(env));
                    ++counters.envelope_messages;
                }
            }
        }
    }
    result.pool_entries = pool.entry_count();
    result.share_envelopes = pool.envelope_count();

    // REQUEST: the dApp selects entries; the chain vets the selection.
    pool.advance_phase(round_id, Phase::Request);
    ts.append(Phase::Request, "orchestrator", kind::kPhaseAdvance, json{{"round", round_id}, {"to", "REQUEST"}});

    result.request = build_request(pool, config, round_id, adversary.dapp_strategy,
                                   adversary.compromised_gateways);
    counters.request_messages += config.n_g;
    json selected = json::array();
    for (std::uint64_t id : result.request.selected_entries) {
        selected.push_back(id);
    }
    ts.append(Phase::Request, "dapp", kind::kRequest,
              json{{"request_id", result.request.request_id},
                   {"round", round_id},
                   {"selected", selected},
                   {"method", to_string(result.request.aggregation_method)},
                   {"requester", result.request.requester}});

    Verdict admission = validate_request(result.request, pool, config, adversary.disable_diversity_check);
    ts.append(Phase::Request, "chain", kind::kRequestVerdict,
              json{{"accepted", admission.accepted}, {"reason", admission.reason}, {"detail", admission.detail}});
    if (!admission.accepted) {
        throw Error(ErrorCode::RoundFailed, "request rejected: " + admission.reason + ": " + admission.detail);
    }

    // RESPOND: willing gateways contribute decrypted shares; openings and raw
    // bits are recovered per selected entry.
    pool.advance_phase(round_id, Phase::Respond);
    ts.append(Phase::Respond, "orchestrator", kind::kPhaseAdvance, json{{"round", round_id}, {"to", "RESPOND"}});

    const bool refusing_active = adversary.gateway_strategy == GatewayStrategy::RefuseReveal;
    std::vector<std::uint32_t> willing;
    for (std::uint32_t g = 1; g <= config.n_g; ++g) {
        if (refusing_active && adversary.compromised_gateways.count(g) != 0) {
            ts.append(Phase::Respond, "gateway:" + std::to_string(g), kind::kRefusal,
                      json{{"gateway", g}, {"request_id", result.request.request_id}});
            continue;
        }
        willing.push_back(g);
    }
    if (willing.size() < config.t) {
        throw Error(ErrorCode::RoundFailed, "only " + std::to_string(willing.size()) +
                                                " gateways willing to reveal, threshold is " +
                                                std::to_string(config.t));
    }
    std::vector<std::uint32_t> contributors(willing.begin(), willing.begin() + config.t);

    std::map<std::uint32_t, std::map<std::uint64_t, ShareEnvelope>> inbox;
    for (std::uint32_t g : contributors) {
        for (ShareEnvelope& env : pool.fetch_shares(g, g)) {
            inbox[g].emplace(env.entry_id, std::move(env));
        }
    }

    for (std::uint64_t entry_id : result.request.selected_entries) {
        const PoolEntry& entry = pool.get(entry_id);
        RevealRecord reveal;
        reveal.entry_id = entry_id;
        std::vector<Share> shares;
        for (std::uint32_t g : contributors) {
            auto it = inbox[g].find(entry_id);
            if (it == inbox[g].end()) {
                throw Error(ErrorCode::RoundFailed,
                            "gateway " + std::to_string(g) + " holds no share for entry " +
                                std::to_string(entry_id));
            }
            Share share = open_share_envelope(box_keys[g], entry_id, g, it->second.ciphertext);
            ts.append(Phase::Respond, "gateway:" + std::to_string(g), kind::kContribution,
                      json{{"entry_id", entry_id}, {"share", share_json(g, share)}});
            counters.reveal_messages += config.k; // broadcast to every gateway
            reveal.contributing_shares.push_back({g, share});
            shares.push_back(share);
        }
        reveal.opening = reconstruct(shares, config.t, p);
        ++counters.reconstruct_ops;

        BoxKey capsule_key =
            derive_capsule_key(reveal.opening, round_id, entry.gateway_id, entry.device_id, entry.sequence);
        auto contents = open_capsule(capsule_key, entry.bits_capsule);
        if (!contents) {
            throw Error(ErrorCode::RoundFailed,
                        "bits capsule for entry " + std::to_string(entry_id) + " did not open");
        }
        reveal.raw_bits = contents->raw_bits;
        reveal.device_signature = contents->device_signature;

        json shares_list = json::array();
        for (const auto& [g, share] : reveal.contributing_shares) {
            shares_list.push_back(share_json(g, share));
        }
        ts.append(Phase::Respond, "gateway:" + std::to_string(contributors[0]), kind::kReveal,
                  json{{"entry_id", entry_id},
                       {"opening",
                        json{{"message", to_dec(reveal.opening.message)},
                             {"blinding", to_dec(reveal.opening.blinding)}}},
                       {"shares", shares_list},
                       {"device_signature", to_hex(reveal.device_signature.data)},
                       {"raw_bits", reveal.raw_bits.to_hex()},
                       {"bit_count", reveal.raw_bits.bit_count()}});
        result.reveals.push_back(std::move(reveal));
    }

    // CONSTRUCT: the chain verifies and aggregates.
    pool.advance_phase(round_id, Phase::Construct);
    ts.append(Phase::Construct, "orchestrator", kind::kPhaseAdvance,
              json{{"round", round_id}, {"to", "CONSTRUCT"}});

    AggregateOutcome outcome;
    if (config.aggregation == AggregationMethod::Xor) {
        outcome = aggregate_non_optimized(group, result.request, result.reveals, pool, config, &registry);
    } else {
        outcome = aggregate_optimized(group, result.request, result.reveals, pool, config, &registry);
    }
    if (!outcome.verdict.accepted) {
        throw Error(ErrorCode::RoundFailed,
                    "verification rejected: " + outcome.verdict.reason + ": " + outcome.verdict.detail);
    }
    result.final_result = outcome.result;

    result.gas_report.mode = result.final_result.mode;
    result.gas_report.ell = config.ell;
    result.gas_report.counts = result.final_result.ops;
    result.gas_report.total_gas = price(result.final_result.ops, config.gas_schedule);
    result.gas_report.closed_form_gas = closed_form(result.final_result.mode, config.ell);

    json final_payload{{"outcome", "completed"},
                       {"mode", to_string(result.final_result.mode)},
                       {"ell", config.ell},
                       {"ops", ops_json(result.final_result.ops)},
                       {"total_gas", result.gas_report.total_gas},
                       {"closed_form_gas", result.gas_report.closed_form_gas},
                       {"counters", counters_json(counters)}};
    if (result.final_result.mode == VerifierMode::NonOptimized) {
        final_payload["value_bits"] = result.final_result.value_bits.to_hex();
        final_payload["bit_count"] = result.final_result.value_bits.bit_count();
    } else {
        final_payload["value_scalar"] = to_dec(result.final_result.value_scalar);
    }
    ts.append(Phase::Construct, "chain", kind::kFinal, final_payload);
    ts.append_seal();
    return result;
}

} // namespace hrng
