#include "hrng/pool.hpp"

#include "hrng/error.hpp"
#include "hrng/hex.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace hrng {

using nlohmann::json;

Phase Pool::phase(std::uint32_t round_id) const {
    auto it = phases_.find(round_id);
    return it == phases_.end() ? Phase::Setup : it->second;
}

void Pool::advance_phase(std::uint32_t round_id, Phase next) {
    Phase cur = phase(round_id);
    if (static_cast<int>(next) <= static_cast<int>(cur)) {
        throw Error(ErrorCode::PhaseViolation, std::string("cannot move round back from ") + to_string(cur) +
                                                   " to " + to_string(next));
    }
    phases_[round_id] = next;
    json rec{{"kind", "phase"}, {"round_id", round_id}, {"phase", to_string(next)}};
    log_.push_back(rec.dump());
}

std::uint64_t Pool::publish(PoolEntry entry) {
    if (phase(entry.round_id) != Phase::Publish) {
        throw Error(ErrorCode::PhaseViolation,
                    "publish while round is in " + std::string(to_string(phase(entry.round_id))));
    }
    auto key = std::make_tuple(entry.round_id, entry.gateway_id, entry.device_id, entry.sequence);
    if (!published_keys_.insert(key).second) {
        throw Error(ErrorCode::DuplicateEntry,
                    "entry already published for round " + std::to_string(entry.round_id) + " gateway " +
                        std::to_string(entry.gateway_id) + " device " + std::to_string(entry.device_id) +
                        " sequence " + std::to_string(entry.sequence));
    }
    entry.entry_id = entries_.size() + 1;
    entry.published_at = ++clock_;
    entry_index_[entry.entry_id] = entries_.size();

    json rec{{"kind", "entry"},
             {"entry_id", entry.entry_id},
             {"round_id", entry.round_id},
             {"gateway_id", entry.gateway_id},
             {"device_id", entry.device_id},
             {"sequence", entry.sequence},
             {"commitment", entry.commitment.element.to_hex()},
             {"capsule", to_hex(entry.bits_capsule)},
             {"published_at", entry.published_at}};
    log_.push_back(rec.dump());

    entries_.push_back(std::move(entry));
    return entries_.back().entry_id;
}

std::vector<PoolEntry> Pool::query(std::uint32_t round_id, const PoolFilter& filter) const {
    std::vector<PoolEntry> out;
    for (const PoolEntry& e : entries_) {
        if (e.round_id != round_id) {
            continue;
        }
        if (filter.gateway_id && e.gateway_id != *filter.gateway_id) {
            continue;
        }
        if (filter.device_id && e.device_id != *filter.device_id) {
            continue;
        }
        out.push_back(e);
    }
    return out;
}

const PoolEntry& Pool::get(std::uint64_t entry_id) const {
    auto it = entry_index_.find(entry_id);
    if (it == entry_index_.end()) {
        throw Error(ErrorCode::UnknownEntry, "entry " + std::to_string(entry_id));
    }
    return entries_[it->second];
}

void Pool::deposit_share(ShareEnvelope env) {
    const PoolEntry& entry = get(env.entry_id);
    if (phase(entry.round_id) != Phase::Publish) {
        throw Error(ErrorCode::PhaseViolation,
                    "deposit while round is in " + std::string(to_string(phase(entry.round_id))));
    }
    if (!envelope_keys_.insert({env.entry_id, env.recipient_gateway}).second) {
        throw Error(ErrorCode::DuplicateEntry, "envelope for entry " + std::to_string(env.entry_id) +
                                                   " recipient " + std::to_string(env.recipient_gateway));
    }
    json rec{{"kind", "envelope"},
             {"entry_id", env.entry_id},
             {"recipient_gateway", env.recipient_gateway},
             {"ciphertext", to_hex(env.ciphertext)}};
    log_.push_back(rec.dump());
    envelopes_.push_back(std::move(env));
}

std::vector<ShareEnvelope> Pool::fetch_shares(std::uint32_t recipient_gateway,
                                              std::uint32_t caller_gateway) const {
    if (recipient_gateway != caller_gateway) {
        throw Error(ErrorCode::AccessDenied, "gateway " + std::to_string(caller_gateway) +
                                                 " fetching envelopes addressed to " +
                                                 std::to_string(recipient_gateway));
    }
    std::vector<ShareEnvelope> out;
    for (const ShareEnvelope& env : envelopes_) {
        if (env.recipient_gateway == recipient_gateway) {
            out.push_back(env);
        }
    }
    return out;
}

std::string Pool::serialize() const {
    std::string out;
    for (const std::string& line : log_) {
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace hrng
