#pragma once

#include "hrng/bitstring.hpp"
#include "hrng/gas_model.hpp"
#include "hrng/group.hpp"
#include "hrng/pedersen.hpp"
#include "hrng/pool.hpp"
#include "hrng/shamir.hpp"
#include "hrng/signature.hpp"
#include "hrng/system_config.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hrng {

struct RandomRequest {
    std::uint64_t request_id = 0;
    std::uint32_t round_id = 0;
    std::vector<std::uint64_t> selected_entries; // exactly ell distinct published ids
    AggregationMethod aggregation_method = AggregationMethod::Xor;
    std::string requester;

    bool operator==(const RandomRequest&) const = default;
};

struct RevealRecord {
    std::uint64_t entry_id = 0;
    Opening opening;
    std::vector<std::pair<std::uint32_t, Share>> contributing_shares; // (gateway_id, share)
    Signature device_signature;
    BitString raw_bits;

    bool operator==(const RevealRecord&) const = default;
};

struct FinalResult {
    VerifierMode mode = VerifierMode::NonOptimized;
    BigInt value_scalar;  // Optimized: sum of messages mod p
    BitString value_bits; // NonOptimized: XOR of the raw bit strings
    OpCounts ops;

    bool operator==(const FinalResult&) const = default;
};

struct Verdict {
    bool accepted = false;
    std::string reason; // stable machine-readable tag, empty when accepted
    std::string detail;

    static Verdict ok() { return Verdict{true, "", ""}; }
    static Verdict fail(std::string reason, std::string detail) {
        return Verdict{false, std::move(reason), std::move(detail)};
    }
};

struct AggregateOutcome {
    Verdict verdict;
    FinalResult result; // meaningful only when verdict.accepted
};

// Reject tags emitted by the verifier.
namespace reject {
inline constexpr const char* kWrongArity = "WrongArity";
inline constexpr const char* kDuplicateSelection = "DuplicateSelection";
inline constexpr const char* kUnknownEntrySelection = "UnknownEntrySelection";
inline constexpr const char* kWrongRound = "WrongRound";
inline constexpr const char* kGatewayDiversity = "GatewayDiversity";
inline constexpr const char* kUnsupportedAggregation = "UnsupportedAggregation";
inline constexpr const char* kRevealMismatch = "RevealMismatch";
inline constexpr const char* kBadOpening = "BadOpening";
inline constexpr const char* kBadDeviceSignature = "BadDeviceSignature";
inline constexpr const char* kRawBitsMismatch = "RawBitsMismatch";
inline constexpr const char* kBadShareReconstruction = "BadShareReconstruction";
inline constexpr const char* kBadAggregateOpening = "BadAggregateOpening";
} // namespace reject

VerifierMode verifier_mode_for(AggregationMethod method);

// Request admission: exactly ell distinct entries, all published in the
// request's round, spanning more gateways than the adversary can control.
// skip_diversity models a sabotaged deployment and exists for negative
// controls only.
Verdict validate_request(const RandomRequest& request, const Pool& pool, const SystemConfig& config,
                         bool skip_diversity = false);

// Key registry: device public keys indexed by (gateway, device).
class DeviceKeyRegistry {
  public:
    DeviceKeyRegistry() = default;
    DeviceKeyRegistry(std::uint32_t n_g, std::uint32_t n_i);

    void set(std::uint32_t gateway_id, std::uint32_t device_id, const PublicKey& key);
    const PublicKey& get(std::uint32_t gateway_id, std::uint32_t device_id) const;
    std::uint32_t gateways() const { return n_g_; }
    std::uint32_t devices_per_gateway() const { return n_i_; }

  private:
    std::uint32_t n_g_ = 0;
    std::uint32_t n_i_ = 0;
    std::vector<PublicKey> keys_;
};

// Opens every commitment individually (2 scalar-mults + 1 group-add each,
// metered) and XOR-folds the raw bit strings (ell-1 additions in the 8-gas
// class, metered). Device signatures and bits/message consistency are checked
// off-meter.
AggregateOutcome aggregate_non_optimized(const Group& group, const RandomRequest& request,
                                         std::span<const RevealRecord> reveals, const Pool& pool,
                                         const SystemConfig& config,
                                         const DeviceKeyRegistry* device_keys = nullptr);

// Folds the ell commitments homomorphically (ell-1 group-adds), sums messages
// and blindings (2(ell-1) additions), and verifies the combined opening once
// (2 scalar-mults + 1 group-add). On failure, an off-meter per-entry sweep
// names the culprit entry.
AggregateOutcome aggregate_optimized(const Group& group, const RandomRequest& request,
                                     std::span<const RevealRecord> reveals, const Pool& pool,
                                     const SystemConfig& config,
                                     const DeviceKeyRegistry* device_keys = nullptr);

struct RevealCheckOptions {
    // Compare commit(opening) against the pool commitment. The optimized path
    // leaves this off and relies on the single combined check instead.
    bool check_opening = true;
    // Metered group/field operations accumulate here when set.
    OpCounts* meter = nullptr;
};

// Checks one reveal against its pool entry: opening vs commitment (optional,
// metered), threshold share reconstruction, raw bits reducing to the
// committed message, and the device signature when a key is supplied.
Verdict check_reveal(const Group& group, const RevealRecord& reveal, const PoolEntry& entry,
                     const SystemConfig& config, const PublicKey* device_key,
                     const RevealCheckOptions& options);

// Runs the requested verification path over ell synthetic tiny-group entries
// with consistent openings and shares, returning the metered operation
// counts. Fast enough for sweeping ell widely.
OpCounts measure_verifier_ops(VerifierMode mode, std::uint32_t ell);

} // namespace hrng
