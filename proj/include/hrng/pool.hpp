#pragma once

#include "hrng/pedersen.hpp"
#include "hrng/phase.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hrng {

struct PoolEntry {
    std::uint64_t entry_id = 0; // assigned by the pool at publish
    std::uint32_t round_id = 0;
    std::uint32_t gateway_id = 0;
    std::uint32_t device_id = 0;
    std::uint32_t sequence = 0; // 1..n_r within (round, gateway, device)
    Commitment commitment;
    // raw bits + device signature, sealed under a key derived from the
    // opening (see capsule.hpp)
    std::vector<std::uint8_t> bits_capsule;
    std::uint64_t published_at = 0; // logical timestamp, assigned by the pool

    bool operator==(const PoolEntry&) const = default;
};

struct ShareEnvelope {
    std::uint64_t entry_id = 0;
    std::uint32_t recipient_gateway = 0;
    std::vector<std::uint8_t> ciphertext;

    bool operator==(const ShareEnvelope&) const = default;
};

struct PoolFilter {
    std::optional<std::uint32_t> gateway_id;
    std::optional<std::uint32_t> device_id;
};

// Append-only store for committed numbers and encrypted share envelopes.
// Writes are gated on the publishing phase of the entry's round; reads are
// allowed at any time. Entries and envelopes are never mutated or removed.
class Pool {
  public:
    Phase phase(std::uint32_t round_id) const;
    // Phases only move forward; stepping backwards or repeating is rejected.
    void advance_phase(std::uint32_t round_id, Phase next);

    // Assigns entry_id and published_at; returns the id.
    std::uint64_t publish(PoolEntry entry);
    std::vector<PoolEntry> query(std::uint32_t round_id, const PoolFilter& filter = {}) const;
    const PoolEntry& get(std::uint64_t entry_id) const;
    std::size_t entry_count() const { return entries_.size(); }

    void deposit_share(ShareEnvelope env);
    // Simulated access control: only the recipient may fetch.
    std::vector<ShareEnvelope> fetch_shares(std::uint32_t recipient_gateway, std::uint32_t caller_gateway) const;
    std::size_t envelope_count() const { return envelopes_.size(); }

    // One record per line in arrival order, so any later state's
    // serialization starts with every earlier state's serialization.
    std::string serialize() const;

  private:
    std::vector<PoolEntry> entries_;
    std::vector<ShareEnvelope> envelopes_;
    std::map<std::uint32_t, Phase> phases_;
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>> published_keys_;
    std::map<std::uint64_t, std::size_t> entry_index_;
    std::set<std::pair<std::uint64_t, std::uint32_t>> envelope_keys_;
    std::vector<std::string> log_;
    std::uint64_t clock_ = 0;
};

} // namespace hrng
