#pragma once

#include "hrng/hash.hpp"
#include "hrng/phase.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hrng {

// Record kinds appearing in a round transcript, in rough phase order.
namespace kind {
inline constexpr const char* kHeader = "header";
inline constexpr const char* kPhaseAdvance = "phase_advance";
inline constexpr const char* kSkippedOutput = "skipped_output";
inline constexpr const char* kPublish = "publish";
inline constexpr const char* kEnvelope = "envelope";
inline constexpr const char* kRequest = "request";
inline constexpr const char* kRequestVerdict = "request_verdict";
inline constexpr const char* kRefusal = "refusal";
inline constexpr const char* kContribution = "contribution";
inline constexpr const char* kReveal = "reveal";
inline constexpr const char* kFinal = "final";
inline constexpr const char* kSeal = "seal";
} // namespace kind

struct TranscriptRecord {
    std::uint64_t seq = 0;
    Phase phase = Phase::Setup;
    std::string actor;
    std::string kind;
    nlohmann::json payload;

    std::string to_line() const;
    static TranscriptRecord from_line(const std::string& line);
};

// Ordered, append-only event log of one protocol round. The final record is a
// seal carrying a digest of everything before it, standing in for the
// immutability a real ledger provides.
class Transcript {
  public:
    const std::vector<TranscriptRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

    std::uint64_t append(Phase phase, std::string actor, std::string kind, nlohmann::json payload);

    // nullptr when no record of that kind exists
    const TranscriptRecord* find_first(const std::string& kind) const;
    const TranscriptRecord* find_last(const std::string& kind) const;
    std::vector<const TranscriptRecord*> find_all(const std::string& kind) const;

    // digest over the serialized lines of the first `count` records
    Digest digest_of(std::size_t count) const;
    void append_seal();

    std::string to_jsonl() const;
    static Transcript from_jsonl(const std::string& text);

  private:
    std::vector<TranscriptRecord> records_;
};

} // namespace hrng
