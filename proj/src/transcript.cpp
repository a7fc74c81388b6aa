#include "hrng/transcript.hpp"

#include "hrng/error.hpp"
#include "hrng/hex.hpp"

#include <sstream>

namespace hrng {

using nlohmann::json;

std::string TranscriptRecord::to_line() const {
    json j{{"seq", seq}, {"phase", to_string(phase)}, {"actor", actor}, {"kind", kind}, {"payload", payload}};
    return j.dump();
}

TranscriptRecord TranscriptRecord::from_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad transcript line: ") + e.what());
    }
    TranscriptRecord rec;
    try {
        rec.seq = j.at("seq").get<std::uint64_t>();
        rec.phase = phase_from_string(j.at("phase").get<std::string>());
        rec.actor = j.at("actor").get<std::string>();
        rec.kind = j.at("kind").get<std::string>();
        rec.payload = j.at("payload");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("transcript record missing field: ") + e.what());
    }
    return rec;
}

std::uint64_t Transcript::append(Phase phase, std::string actor, std::string kind, json payload) {
    TranscriptRecord rec;
    rec.seq = records_.size();
    rec.phase = phase;
    rec.actor = std::move(actor);
    rec.kind = std::move(kind);
    rec.payload = std::move(payload);
    records_.push_back(std::move(rec));
    return records_.back().seq;
}

const TranscriptRecord* Transcript::find_first(const std::string& kind) const {
    for (const TranscriptRecord& rec : records_) {
        if (rec.kind == kind) {
            return &rec;
        }
    }
    return nullptr;
}

const TranscriptRecord* Transcript::find_last(const std::string& kind) const {
    for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
        if (it->kind == kind) {
            return &*it;
        }
    }
    return nullptr;
}

std::vector<const TranscriptRecord*> Transcript::find_all(const std::string& kind) const {
    std::vector<const TranscriptRecord*> out;
    for (const TranscriptRecord& rec : records_) {
        if (rec.kind == kind) {
            out.push_back(&rec);
        }
    }
    return out;
}

Digest Transcript::digest_of(std::size_t count) const {
    Hasher hasher;
    for (std::size_t i = 0; i < count && i < records_.size(); ++i) {
        hasher.update(records_[i].to_line());
        hasher.update("\n");
    }
    return hasher.finish();
}

void Transcript::append_seal() {
    Digest d = digest_of(records_.size());
    Phase last = records_.empty() ? Phase::Setup : records_.back().phase;
    append(last, "ledger", kind::kSeal, json{{"digest", to_hex(d)}});
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const TranscriptRecord& rec : records_) {
        out += rec.to_line();
        out += '\n';
    }
    return out;
}

Transcript Transcript::from_jsonl(const std::string& text) {
    Transcript t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        t.records_.push_back(TranscriptRecord::from_line(line));
    }
    return t;
}

} // namespace hrng
