#include "hrng/transcript_verify.hpp"

#include "hrng/capsule.hpp"
#include "hrng/error.hpp"
#include "hrng/hex.hpp"
#include "hrng/protocol.hpp"

#include <map>
#include <string>

namespace hrng {

using nlohmann::json;

namespace {

struct RejectTranscript {
    Verdict verdict;
};

[[noreturn]] void fail(std::string reason, std::string detail) {
    throw RejectTranscript{Verdict::fail(std::move(reason), std::move(detail))};
}

std::string at(const TranscriptRecord& rec) {
    return "record " + std::to_string(rec.seq) + " (" + rec.kind + ")";
}

template <typename T> T field(const TranscriptRecord& rec, const char* key) {
    auto it = rec.payload.find(key);
    if (it == rec.payload.end()) {
        fail("MalformedRecord", at(rec) + " is missing field '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        fail("MalformedRecord", at(rec) + " field '" + key + "': " + e.what());
    }
}

const json& child(const TranscriptRecord& rec, const char* key) {
    auto it = rec.payload.find(key);
    if (it == rec.payload.end()) {
        fail("MalformedRecord", at(rec) + " is missing field '" + key + "'");
    }
    return *it;
}

Share parse_share(const TranscriptRecord& rec, const json& j) {
    try {
        Share share;
        share.index = j.at("index").get<std::uint32_t>();
        share.message_part = from_dec(j.at("message_part").get<std::string>());
        share.blinding_part = from_dec(j.at("blinding_part").get<std::string>());
        return share;
    } catch (const json::exception& e) {
        fail("MalformedRecord", at(rec) + " share: " + e.what());
    } catch (const Error& e) {
        fail("MalformedRecord", at(rec) + " share: " + e.what());
    }
}

void check_actor(const TranscriptRecord& rec, const std::string& expected) {
    if (rec.actor != expected) {
        fail("ActorMismatch", at(rec) + " has actor '" + rec.actor + "', expected '" + expected + "'");
    }
}

void check_phase(const TranscriptRecord& rec, Phase expected) {
    if (rec.phase != expected) {
        fail("PhaseOrder", at(rec) + " is stamped " + std::string(to_string(rec.phase)) + ", expected " +
                               to_string(expected));
    }
}

} // namespace

Verdict verify_transcript(const Transcript& transcript) {
    try {
        const auto& records = transcript.records();
        if (records.empty()) {
            fail("EmptyTranscript", "no records");
        }

        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].seq != i) {
                fail("BadSequence", "record at position " + std::to_string(i) + " carries seq " +
                                        std::to_string(records[i].seq));
            }
            if (i > 0 && static_cast<int>(records[i].phase) < static_cast<int>(records[i - 1].phase)) {
                fail("PhaseOrder", at(records[i]) + " steps back to " + to_string(records[i].phase));
            }
        }

        const TranscriptRecord& header = records.front();
        if (header.kind != kind::kHeader) {
            fail("MissingHeader", "first record is '" + header.kind + "'");
        }
        check_phase(header, Phase::Setup);

        const TranscriptRecord& seal = records.back();
        if (seal.kind != kind::kSeal) {
            fail("MissingSeal", "last record is '" + seal.kind + "'");
        }
        for (std::size_t i = 0; i + 1 < records.size(); ++i) {
            if (records[i].kind == kind::kSeal) {
                fail("UnexpectedRecord", at(records[i]) + " seals mid-transcript");
            }
            if (i > 0 && records[i].kind == kind::kHeader) {
                fail("UnexpectedRecord", at(records[i]) + " repeats the header");
            }
        }
        Digest expected_digest = transcript.digest_of(records.size() - 1);
        if (field<std::string>(seal, "digest") != to_hex(expected_digest)) {
            fail("SealMismatch", "seal digest does not match the records before it");
        }

        // Header: configuration, adversary, group, device keys.
        SystemConfig config;
        AdversarySpec adversary;
        try {
            config = config_from_json(child(header, "config"));
            validate(config);
            adversary = adversary_from_json(child(header, "adversary"));
            validate(adversary, config);
        } catch (const Error& e) {
            fail(std::string(to_string(e.code())), std::string("header: ") + e.what());
        }
        const std::uint32_t round_id = field<std::uint32_t>(header, "round");

        auto group_ptr = make_group(config.group_name);
        const Group& group = *group_ptr;
        {
            const json& g = child(header, "group");
            if (g.value("name", "") != config.group_name || g.value("order", "") != to_dec(group.order()) ||
                g.value("g", "") != group.g().to_hex() || g.value("h", "") != group.h().to_hex()) {
                fail("HeaderMismatch", "group parameters do not match the named group");
            }
        }
        DeviceKeyRegistry registry(config.n_g, config.n_i);
        {
            const json& keys = child(header, "device_keys");
            if (!keys.is_array() || keys.size() != static_cast<std::size_t>(config.n_g) * config.n_i) {
                fail("HeaderMismatch", "device key list does not cover every device");
            }
            for (const json& item : keys) {
                try {
                    auto bytes = from_hex(item.at("key").get<std::string>());
                    PublicKey pk;
                    if (bytes.size() != pk.data.size()) {
                        fail("HeaderMismatch", "device key with wrong length");
                    }
                    std::copy(bytes.begin(), bytes.end(), pk.data.begin());
                    registry.set(item.at("gateway").get<std::uint32_t>(), item.at("device").get<std::uint32_t>(),
                                 pk);
                } catch (const json::exception& e) {
                    fail("HeaderMismatch", std::string("device key list: ") + e.what());
                } catch (const Error& e) {
                    fail("HeaderMismatch", std::string("device key list: ") + e.what());
                } catch (const std::out_of_range&) {
                    fail("HeaderMismatch", "device key for out-of-range device");
                }
            }
        }

        // Replay.
        Pool pool;
        std::vector<Phase> advances;
        std::uint64_t skipped_outputs = 0;
        bool have_request = false;
        RandomRequest request;
        const TranscriptRecord* verdict_rec = nullptr;
        std::vector<RevealRecord> reveals;
        std::map<std::uint64_t, std::vector<std::pair<std::uint32_t, Share>>> contributions;
        std::vector<std::uint32_t> refusals;
        const TranscriptRecord* final_rec = nullptr;

        for (std::size_t i = 1; i + 1 < records.size(); ++i) {
            const TranscriptRecord& rec = records[i];
            if (rec.kind == kind::kPhaseAdvance) {
                check_actor(rec, "orchestrator");
                if (field<std::uint32_t>(rec, "round") != round_id) {
                    fail("ReplayMismatch", at(rec) + " advances a different round");
                }
                Phase to = phase_from_string(field<std::string>(rec, "to"));
                check_phase(rec, to);
                try {
                    pool.advance_phase(round_id, to);
                } catch (const Error& e) {
                    fail("PhaseOrder", at(rec) + ": " + e.what());
                }
                advances.push_back(to);
            } else if (rec.kind == kind::kPublish) {
                const std::uint32_t gateway = field<std::uint32_t>(rec, "gateway");
                check_actor(rec, "gateway:" + std::to_string(gateway));
                check_phase(rec, Phase::Publish);
                PoolEntry entry;
                entry.round_id = field<std::uint32_t>(rec, "round");
                entry.gateway_id = gateway;
                entry.device_id = field<std::uint32_t>(rec, "device");
                entry.sequence = field<std::uint32_t>(rec, "sequence");
                try {
                    entry.commitment.element = GroupElement::from_hex(field<std::string>(rec, "commitment"));
                    entry.bits_capsule = from_hex(field<std::string>(rec, "capsule"));
                } catch (const Error& e) {
                    fail("MalformedRecord", at(rec) + ": " + e.what());
                }
                if (!group.contains(entry.commitment.element)) {
                    fail("ReplayMismatch", at(rec) + " commitment is not a group element");
                }
                std::uint64_t id = 0;
                try {
                    id = pool.publish(std::move(entry));
                } catch (const Error& e) {
                    fail("ReplayMismatch", at(rec) + ": " + e.what());
                }
                if (id != field<std::uint64_t>(rec, "entry_id") ||
                    pool.get(id).published_at != field<std::uint64_t>(rec, "published_at")) {
                    fail("ReplayMismatch", at(rec) + " ids do not replay to the recorded values");
                }
            } else if (rec.kind == kind::kEnvelope) {
                ShareEnvelope env;
                env.entry_id = field<std::uint64_t>(rec, "entry_id");
                env.recipient_gateway = field<std::uint32_t>(rec, "recipient");
                if (env.recipient_gateway < 1 || env.recipient_gateway > config.k) {
                    fail("ReplayMismatch", at(rec) + " is addressed to a nonexistent gateway");
                }
                try {
                    env.ciphertext = from_hex(field<std::string>(rec, "ciphertext"));
                    check_actor(rec, "gateway:" + std::to_string(pool.get(env.entry_id).gateway_id));
                    check_phase(rec, Phase::Publish);
                    pool.deposit_share(std::move(env));
                } catch (const Error& e) {
                    fail("ReplayMismatch", at(rec) + ": " + e.what());
                }
            } else if (rec.kind == kind::kSkippedOutput) {
                check_phase(rec, Phase::Publish);
                check_actor(rec, "gateway:" + std::to_string(field<std::uint32_t>(rec, "gateway")));
                ++skipped_outputs;
            } else if (rec.kind == kind::kRequest) {
                if (have_request) {
                    fail("UnexpectedRecord", at(rec) + " repeats the request");
                }
                check_actor(rec, "dapp");
                check_phase(rec, Phase::Request);
                if (pool.phase(round_id) != Phase::Request) {
                    fail("PhaseOrder", at(rec) + " arrives outside the request phase");
                }
                request.request_id = field<std::uint64_t>(rec, "request_id");
                request.round_id = field<std::uint32_t>(rec, "round");
                try {
                    request.aggregation_method = aggregation_from_string(field<std::string>(rec, "method"));
                } catch (const Error& e) {
                    fail(reject::kUnsupportedAggregation, at(rec) + ": " + e.what());
                }
                request.requester = field<std::string>(rec, "requester");
                const json& selected = child(rec, "selected");
                if (!selected.is_array()) {
                    fail("MalformedRecord", at(rec) + " selection is not a list");
                }
                for (const json& id : selected) {
                    request.selected_entries.push_back(id.get<std::uint64_t>());
                }
                have_request = true;
            } else if (rec.kind == kind::kRequestVerdict) {
                if (verdict_rec != nullptr) {
                    fail("UnexpectedRecord", at(rec) + " repeats the request verdict");
                }
                if (!have_request) {
                    fail("ReplayMismatch", at(rec) + " arrives before any request");
                }
                check_actor(rec, "chain");
                check_phase(rec, Phase::Request);
                verdict_rec = &rec;
                Verdict recomputed = validate_request(request, pool, config, adversary.disable_diversity_check);
                if (recomputed.accepted != field<bool>(rec, "accepted") ||
                    recomputed.reason != field<std::string>(rec, "reason")) {
                    fail("RequestVerdictMismatch",
                         at(rec) + " disagrees with revalidation (" +
                             (recomputed.accepted ? std::string("accept") : recomputed.reason) + ")");
                }
                if (!recomputed.accepted) {
                    fail(recomputed.reason, "request does not validate: " + recomputed.detail);
                }
            } else if (rec.kind == kind::kRefusal) {
                check_phase(rec, Phase::Respond);
                const std::uint32_t gateway = field<std::uint32_t>(rec, "gateway");
                check_actor(rec, "gateway:" + std::to_string(gateway));
                if (adversary.gateway_strategy != GatewayStrategy::RefuseReveal ||
                    adversary.compromised_gateways.count(gateway) == 0) {
                    fail("ReplayMismatch", at(rec) + " refusal from a gateway not declared refusing");
                }
                refusals.push_back(gateway);
            } else if (rec.kind == kind::kContribution) {
                check_phase(rec, Phase::Respond);
                const json& sj = child(rec, "share");
                const std::uint32_t gateway = sj.value("gateway", 0u);
                check_actor(rec, "gateway:" + std::to_string(gateway));
                contributions[field<std::uint64_t>(rec, "entry_id")].push_back(
                    {gateway, parse_share(rec, sj)});
            } else if (rec.kind == kind::kReveal) {
                check_phase(rec, Phase::Respond);
                RevealRecord reveal;
                reveal.entry_id = field<std::uint64_t>(rec, "entry_id");
                const json& opening = child(rec, "opening");
                try {
                    reveal.opening.message = from_dec(opening.at("message").get<std::string>());
                    reveal.opening.blinding = from_dec(opening.at("blinding").get<std::string>());
                    auto sig = from_hex(field<std::string>(rec, "device_signature"));
                    if (sig.size() != reveal.device_signature.data.size()) {
                        fail("MalformedRecord", at(rec) + " signature with wrong length");
                    }
                    std::copy(sig.begin(), sig.end(), reveal.device_signature.data.begin());
                    reveal.raw_bits = BitString::from_hex(field<std::string>(rec, "raw_bits"),
                                                          field<std::size_t>(rec, "bit_count"));
                } catch (const json::exception& e) {
                    fail("MalformedRecord", at(rec) + ": " + e.what());
                } catch (const Error& e) {
                    fail("MalformedRecord", at(rec) + ": " + e.what());
                }
                for (const json& sj : child(rec, "shares")) {
                    reveal.contributing_shares.push_back({sj.value("gateway", 0u), parse_share(rec, sj)});
                }
                reveals.push_back(std::move(reveal));
            } else if (rec.kind == kind::kFinal) {
                if (final_rec != nullptr) {
                    fail("UnexpectedRecord", at(rec) + " repeats the final record");
                }
                check_actor(rec, "chain");
                check_phase(rec, Phase::Construct);
                if (pool.phase(round_id) != Phase::Construct) {
                    fail("PhaseOrder", at(rec) + " arrives outside the construct phase");
                }
                final_rec = &rec;
            } else {
                fail("UnexpectedRecord", at(rec) + " has unknown kind");
            }
        }

        if (advances != std::vector<Phase>{Phase::Publish, Phase::Request, Phase::Respond, Phase::Construct}) {
            fail("PhaseOrder", "phases did not advance PUBLISH -> REQUEST -> RESPOND -> CONSTRUCT exactly once");
        }
        if (!have_request || verdict_rec == nullptr) {
            fail("MissingRequest", "transcript has no admitted request");
        }
        if (final_rec == nullptr) {
            fail("MissingFinal", "transcript has no final record");
        }

        // Counting checks.
        const std::uint64_t total_slots =
            static_cast<std::uint64_t>(config.n_g) * config.n_i * config.n_r;
        const std::uint64_t entries = pool.entry_count();
        if (adversary.device_strategy == DeviceStrategy::DiscardUnfavored) {
            if (entries + skipped_outputs > total_slots) {
                fail("CountMismatch", "more entries than device slots");
            }
        } else if (entries + skipped_outputs != total_slots) {
            fail("CountMismatch", "expected " + std::to_string(total_slots) + " outputs, transcript shows " +
                                      std::to_string(entries + skipped_outputs));
        }
        if (pool.envelope_count() != entries * config.k) {
            fail("CountMismatch", "expected one envelope per entry per gateway");
        }

        // Reveals match the selection, their contributions, and the capsules.
        if (reveals.size() != request.selected_entries.size()) {
            fail(reject::kRevealMismatch, "transcript reveals " + std::to_string(reveals.size()) +
                                              " entries, request selected " +
                                              std::to_string(request.selected_entries.size()));
        }
        for (std::size_t i = 0; i < reveals.size(); ++i) {
            const RevealRecord& reveal = reveals[i];
            if (reveal.entry_id != request.selected_entries[i]) {
                fail(reject::kRevealMismatch, "reveal order does not follow the selection");
            }
            auto it = contributions.find(reveal.entry_id);
            if (it == contributions.end() || it->second != reveal.contributing_shares) {
                fail("ContributionMismatch", "contributions for entry " + std::to_string(reveal.entry_id) +
                                                 " do not match the reveal");
            }
            for (const auto& [g, share] : reveal.contributing_shares) {
                for (std::uint32_t refused : refusals) {
                    if (g == refused) {
                        fail("ContributionMismatch", "refusing gateway " + std::to_string(g) + " contributed");
                    }
                }
            }
            const PoolEntry& entry = pool.get(reveal.entry_id);
            BoxKey key = derive_capsule_key(reveal.opening, entry.round_id, entry.gateway_id, entry.device_id,
                                            entry.sequence);
            auto contents = open_capsule(key, entry.bits_capsule);
            if (!contents || !(contents->raw_bits == reveal.raw_bits) ||
                !(contents->device_signature == reveal.device_signature)) {
                fail("CapsuleMismatch", "capsule for entry " + std::to_string(reveal.entry_id) +
                                            " does not reproduce the revealed bits");
            }
        }

        // Chain re-verification.
        AggregateOutcome outcome;
        if (request.aggregation_method == AggregationMethod::Xor) {
            outcome = aggregate_non_optimized(group, request, reveals, pool, config, &registry);
        } else {
            outcome = aggregate_optimized(group, request, reveals, pool, config, &registry);
        }
        if (!outcome.verdict.accepted) {
            fail(outcome.verdict.reason, outcome.verdict.detail);
        }

        const TranscriptRecord& fin = *final_rec;
        if (field<std::string>(fin, "outcome") != "completed" ||
            field<std::string>(fin, "mode") != to_string(outcome.result.mode) ||
            field<std::uint32_t>(fin, "ell") != config.ell) {
            fail("FinalMismatch", "final record outcome/mode/ell do not match the recomputation");
        }
        if (outcome.result.mode == VerifierMode::NonOptimized) {
            if (field<std::string>(fin, "value_bits") != outcome.result.value_bits.to_hex() ||
                field<std::size_t>(fin, "bit_count") != outcome.result.value_bits.bit_count()) {
                fail("FinalMismatch", "recorded final value differs from the recomputed XOR");
            }
        } else if (field<std::string>(fin, "value_scalar") != to_dec(outcome.result.value_scalar)) {
            fail("FinalMismatch", "recorded final value differs from the recomputed sum");
        }

        const json& ops = child(fin, "ops");
        OpCounts recorded_ops{ops.value("ecadd", std::uint64_t{0}), ops.value("ecmul", std::uint64_t{0}),
                              ops.value("addmod", std::uint64_t{0}), ops.value("mulmod", std::uint64_t{0})};
        if (!(recorded_ops == outcome.result.ops)) {
            fail("GasMismatch", "recorded operation counts differ from the measured ones");
        }
        if (field<std::uint64_t>(fin, "total_gas") != price(outcome.result.ops, config.gas_schedule) ||
            field<std::uint64_t>(fin, "closed_form_gas") != closed_form(outcome.result.mode, config.ell)) {
            fail("GasMismatch", "recorded gas does not match the schedule");
        }

        const json& cj = child(fin, "counters");
        ProtocolCounters recorded{cj.value("commit_ops", std::uint64_t{0}),
                                  cj.value("split_ops", std::uint64_t{0}),
                                  cj.value("reconstruct_ops", std::uint64_t{0}),
                                  cj.value("device_messages", std::uint64_t{0}),
                                  cj.value("envelope_messages", std::uint64_t{0}),
                                  cj.value("request_messages", std::uint64_t{0}),
                                  cj.value("reveal_messages", std::uint64_t{0})};
        ProtocolCounters expected;
        expected.commit_ops = entries;
        expected.split_ops = entries;
        expected.reconstruct_ops = reveals.size();
        expected.device_messages = entries + skipped_outputs;
        expected.envelope_messages = entries * config.k;
        expected.request_messages = config.n_g;
        expected.reveal_messages =
            static_cast<std::uint64_t>(reveals.size()) * config.t * config.k;
        if (!(recorded == expected)) {
            fail("CounterMismatch", "recorded message/work counters do not match the replay");
        }

        return Verdict::ok();
    } catch (const RejectTranscript& r) {
        return r.verdict;
    } catch (const Error& e) {
        return Verdict::fail("MalformedTranscript", e.what());
    } catch (const json::exception& e) {
        return Verdict::fail("MalformedRecord", e.what());
    }
}

} // namespace hrng
