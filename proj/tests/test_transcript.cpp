#include "hrng/transcript.hpp"
#include "hrng/error.hpp"
#include "hrng/hex.hpp"

#include <doctest.h>

using namespace hrng;
using nlohmann::json;

TEST_CASE("records serialize one per line with stable keys") {
    Transcript t;
    t.append(Phase::Setup, "orchestrator", kind::kHeader, json{{"round", 1}});
    t.append(Phase::Publish, "gateway:1", kind::kPublish, json{{"entry_id", 1}});
    std::string text = t.to_jsonl();
    CHECK(text.find("\"seq\":0") != std::string::npos);
    CHECK(text.find("\"phase\":\"SETUP\"") != std::string::npos);
    CHECK(text.find("\"phase\":\"PUBLISH\"") != std::string::npos);

    Transcript back = Transcript::from_jsonl(text);
    REQUIRE(back.size() == 2);
    CHECK(back.records()[0].seq == 0);
    CHECK(back.records()[0].actor == "orchestrator");
    CHECK(back.records()[1].kind == kind::kPublish);
    CHECK(back.records()[1].payload.at("entry_id") == 1);
    CHECK(back.to_jsonl() == text);
}

TEST_CASE("append assigns sequence numbers") {
    Transcript t;
    CHECK(t.append(Phase::Setup, "a", "x", json::object()) == 0);
    CHECK(t.append(Phase::Setup, "a", "x", json::object()) == 1);
    CHECK(t.append(Phase::Publish, "b", "y", json::object()) == 2);
}

TEST_CASE("find helpers") {
    Transcript t;
    t.append(Phase::Setup, "a", "x", json{{"n", 1}});
    t.append(Phase::Setup, "a", "y", json{{"n", 2}});
    t.append(Phase::Setup, "a", "x", json{{"n", 3}});
    CHECK(t.find_first("x")->payload.at("n") == 1);
    CHECK(t.find_last("x")->payload.at("n") == 3);
    CHECK(t.find_all("x").size() == 2);
    CHECK(t.find_first("zzz") == nullptr);
}

TEST_CASE("seal digests everything before it") {
    Transcript t;
    t.append(Phase::Setup, "orchestrator", kind::kHeader, json{{"round", 1}});
    t.append(Phase::Construct, "chain", kind::kFinal, json{{"outcome", "completed"}});
    t.append_seal();
    REQUIRE(t.size() == 3);
    const TranscriptRecord& seal = t.records().back();
    CHECK(seal.kind == kind::kSeal);
    CHECK(seal.actor == "ledger");
    std::string digest_hex = seal.payload.at("digest").get<std::string>();
    CHECK(digest_hex == to_hex(t.digest_of(2)));
    // any earlier change breaks the digest
    Transcript other;
    other.append(Phase::Setup, "orchestrator", kind::kHeader, json{{"round", 2}});
    other.append(Phase::Construct, "chain", kind::kFinal, json{{"outcome", "completed"}});
    CHECK(to_hex(other.digest_of(2)) != digest_hex);
}

TEST_CASE("from_jsonl rejects garbage") {
    CHECK_THROWS_AS((void)Transcript::from_jsonl("not json\n"), Error);
    CHECK_THROWS_AS((void)Transcript::from_jsonl("{\"seq\":0}\n"), Error);
    // truncated mid-line
    Transcript t;
    t.append(Phase::Setup, "a", "x", json{{"n", 1}});
    std::string text = t.to_jsonl();
    CHECK_THROWS_AS((void)Transcript::from_jsonl(text.substr(0, text.size() / 2)), Error);
}

TEST_CASE("blank lines are skipped") {
    Transcript t;
    t.append(Phase::Setup, "a", "x", json{{"n", 1}});
    std::string text = "\n" + t.to_jsonl() + "\n\n";
    CHECK(Transcript::from_jsonl(text).size() == 1);
}

TEST_CASE("record line roundtrip") {
    TranscriptRecord r;
    r.seq = 5;
    r.phase = Phase::Respond;
    r.actor = "gateway:2";
    r.kind = kind::kContribution;
    r.payload = json{{"entry_id", 3}, {"share", json{{"index", 2}}}};
    TranscriptRecord back = TranscriptRecord::from_line(r.to_line());
    CHECK(back.seq == r.seq);
    CHECK(back.phase == r.phase);
    CHECK(back.actor == r.actor);
    CHECK(back.kind == r.kind);
    CHECK(back.payload == r.payload);
}
