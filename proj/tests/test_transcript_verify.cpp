#include "hrng/protocol.hpp"
#include "hrng/transcript_verify.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace hrng;
using nlohmann::json;

namespace {

SystemConfig small_config(std::uint64_t seed, AggregationMethod method = AggregationMethod::Xor) {
    SystemConfig config;
    config.group_name = "test11";
    config.entropy_bits = 68;
    config.seed = seed;
    config.aggregation = method;
    return config;
}

// all records except the trailing seal, as mutable copies
std::vector<TranscriptRecord> body_of(const Transcript& ts) {
    const auto& records = ts.records();
    return {records.begin(), records.end() - 1};
}

// rebuild with fresh sequence numbers and a fresh seal
Transcript reseal(const std::vector<TranscriptRecord>& body) {
    Transcript fresh;
    for (const TranscriptRecord& rec : body) {
        fresh.append(rec.phase, rec.actor, rec.kind, rec.payload);
    }
    fresh.append_seal();
    return fresh;
}

std::size_t index_of(const std::vector<TranscriptRecord>& body, const char* kind, std::size_t nth = 0) {
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i].kind == kind) {
            if (nth == 0) {
                return i;
            }
            --nth;
        }
    }
    FAIL("no such record: ", kind);
    return 0;
}

} // namespace

TEST_CASE("transcripts from every adversary profile verify") {
    CHECK(verify_transcript(run_round(small_config(31), AdversarySpec{}).transcript).accepted);
    CHECK(verify_transcript(run_round(small_config(32, AggregationMethod::SumModP), AdversarySpec{}).transcript)
              .accepted);

    AdversarySpec refusing;
    refusing.compromised_gateways = {2};
    refusing.gateway_strategy = GatewayStrategy::RefuseReveal;
    CHECK(verify_transcript(run_round(small_config(33), refusing).transcript).accepted);

    AdversarySpec quiet;
    quiet.compromised_devices = {{1, 1}, {2, 1}};
    quiet.device_strategy = DeviceStrategy::DiscardUnfavored;
    quiet.discard_rule = DiscardRule::NoneKept;
    CHECK(verify_transcript(run_round(small_config(34), quiet).transcript).accepted);

    AdversarySpec biased;
    biased.compromised_devices = {{3, 1}};
    biased.device_strategy = DeviceStrategy::BiasedOutput;
    biased.target_value = 9;
    CHECK(verify_transcript(run_round(small_config(35), biased).transcript).accepted);
}

TEST_CASE("empty transcripts are rejected") {
    Verdict v = verify_transcript(Transcript{});
    CHECK(!v.accepted);
    CHECK(v.reason == "EmptyTranscript");
}

TEST_CASE("a flipped byte breaks the seal") {
    Transcript base = run_round(small_config(36), AdversarySpec{}).transcript;
    std::string text = base.to_jsonl();
    std::size_t pos = text.find("\"commitment\":\"");
    REQUIRE(pos != std::string::npos);
    pos += std::string("\"commitment\":\"").size();
    text[pos] = text[pos] == '0' ? '1' : '0';

    Verdict v = verify_transcript(Transcript::from_jsonl(text));
    CHECK(!v.accepted);
    CHECK(v.reason == "SealMismatch");
}

TEST_CASE("structural damage is named") {
    Transcript base = run_round(small_config(37), AdversarySpec{}).transcript;

    SUBCASE("missing seal") {
        Transcript unsealed;
        for (const TranscriptRecord& rec : body_of(base)) {
            unsealed.append(rec.phase, rec.actor, rec.kind, rec.payload);
        }
        Verdict v = verify_transcript(unsealed);
        CHECK(!v.accepted);
        CHECK(v.reason == "MissingSeal");
    }

    SUBCASE("unknown record kind") {
        auto body = body_of(base);
        TranscriptRecord stray = body[index_of(body, kind::kRequest)];
        stray.kind = "gossip";
        body.insert(body.begin() + static_cast<std::ptrdiff_t>(index_of(body, kind::kRequest)), stray);
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "UnexpectedRecord");
    }

    SUBCASE("repeated header") {
        auto body = body_of(base);
        body.insert(body.begin() + 1, body.front());
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "UnexpectedRecord");
    }

    SUBCASE("sequence numbers must be contiguous") {
        // re-serialize with one seq bumped; the seal still matches its own
        // lines so the sequence check has to catch it
        auto body = body_of(base);
        Transcript crooked;
        for (const TranscriptRecord& rec : body) {
            crooked.append(rec.phase, rec.actor, rec.kind, rec.payload);
        }
        crooked.append_seal();
        std::string text = crooked.to_jsonl();
        std::size_t pos = text.find("\"seq\":3}");
        REQUIRE(pos != std::string::npos);
        std::string text2 = text.substr(0, pos) + "\"seq\":4}" + text.substr(pos + 8);
        Verdict v = verify_transcript(Transcript::from_jsonl(text2));
        CHECK(!v.accepted);
        // either the digest or the numbering flags it first
        CHECK((v.reason == "BadSequence" || v.reason == "SealMismatch"));
    }
}

TEST_CASE("resealed tampering is still rejected") {
    Transcript base = run_round(small_config(38), AdversarySpec{}).transcript;

    SUBCASE("publish ids must replay") {
        auto body = body_of(base);
        body[index_of(body, kind::kPublish)].payload["entry_id"] = 9;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "ReplayMismatch");
    }

    SUBCASE("a swapped commitment no longer opens") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kPublish)].payload;
        std::string hex = payload.at("commitment").get<std::string>();
        payload["commitment"] = hex == "01" ? "02" : "01";
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == reject::kBadOpening);
    }

    SUBCASE("envelopes must address a real gateway") {
        auto body = body_of(base);
        body[index_of(body, kind::kEnvelope)].payload["recipient"] = 9;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "ReplayMismatch");
    }

    SUBCASE("a dropped contribution is missed") {
        auto body = body_of(base);
        body.erase(body.begin() + static_cast<std::ptrdiff_t>(index_of(body, kind::kContribution)));
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "ContributionMismatch");
    }

    SUBCASE("a dropped reveal is missed") {
        auto body = body_of(base);
        body.erase(body.begin() + static_cast<std::ptrdiff_t>(index_of(body, kind::kReveal)));
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == reject::kRevealMismatch);
    }

    SUBCASE("reveal order must follow the selection") {
        auto body = body_of(base);
        std::size_t first = index_of(body, kind::kReveal, 0);
        std::size_t second = index_of(body, kind::kReveal, 1);
        std::swap(body[first].payload, body[second].payload);
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == reject::kRevealMismatch);
    }

    SUBCASE("revealed bits must match the capsule") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kReveal)].payload;
        std::string hex = payload.at("raw_bits").get<std::string>();
        hex[hex.size() - 1] = hex.back() == '0' ? '1' : '0';
        payload["raw_bits"] = hex;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "CapsuleMismatch");
    }

    SUBCASE("the request verdict must match revalidation") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kRequestVerdict)].payload;
        payload["accepted"] = false;
        payload["reason"] = "WrongArity";
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "RequestVerdictMismatch");
    }

    SUBCASE("an uninvited refusal is flagged") {
        auto body = body_of(base);
        std::size_t pos = index_of(body, kind::kContribution);
        TranscriptRecord refusal;
        refusal.phase = Phase::Respond;
        refusal.actor = "gateway:2";
        refusal.kind = kind::kRefusal;
        refusal.payload = json{{"gateway", 2}, {"request_id", 1}};
        body.insert(body.begin() + static_cast<std::ptrdiff_t>(pos), refusal);
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "ReplayMismatch");
    }

    SUBCASE("a swapped device key breaks the signature check") {
        auto body = body_of(base);
        json& keys = body.front().payload["device_keys"];
        std::string hex = keys[0]["key"].get<std::string>();
        hex[0] = hex[0] == '0' ? '1' : '0';
        keys[0]["key"] = hex;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == reject::kBadDeviceSignature);
    }

    SUBCASE("the final value is pinned") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kFinal)].payload;
        std::string hex = payload.at("value_bits").get<std::string>();
        hex[0] = hex[0] == '0' ? '1' : '0';
        payload["value_bits"] = hex;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "FinalMismatch");
    }

    SUBCASE("the gas figures are pinned") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kFinal)].payload;
        payload["total_gas"] = payload.at("total_gas").get<std::uint64_t>() + 1;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "GasMismatch");
    }

    SUBCASE("the traffic counters are pinned") {
        auto body = body_of(base);
        json& payload = body[index_of(body, kind::kFinal)].payload;
        payload["counters"]["reveal_messages"] = 7;
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "CounterMismatch");
    }

    SUBCASE("the group parameters are pinned") {
        auto body = body_of(base);
        body.front().payload["group"]["g"] = "04";
        Verdict v = verify_transcript(reseal(body));
        CHECK(!v.accepted);
        CHECK(v.reason == "HeaderMismatch");
    }
}

TEST_CASE("refusal transcripts replay the refusals") {
    AdversarySpec refusing;
    refusing.compromised_gateways = {1};
    refusing.gateway_strategy = GatewayStrategy::RefuseReveal;
    Transcript base = run_round(small_config(39), refusing).transcript;
    REQUIRE(verify_transcript(base).accepted);

    // promote the refusing gateway into the contributor set: contributions
    // from a declared refuser are rejected
    auto body = body_of(base);
    std::size_t pos = index_of(body, kind::kContribution);
    TranscriptRecord forged = body[pos];
    forged.actor = "gateway:1";
    forged.payload["share"]["gateway"] = 1;
    body.insert(body.begin() + static_cast<std::ptrdiff_t>(pos), forged);
    Verdict v = verify_transcript(reseal(body));
    CHECK(!v.accepted);
    CHECK(v.reason == "ContributionMismatch");
}
