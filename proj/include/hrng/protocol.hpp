#pragma once

#include "hrng/chain_verifier.hpp"
#include "hrng/rng.hpp"
#include "hrng/secretbox.hpp"
#include "hrng/system_config.hpp"
#include "hrng/transcript.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace hrng {

struct DeviceOutput {
    std::uint32_t device_id = 0;
    BitString raw_bits;
    Signature signature;

    bool operator==(const DeviceOutput&) const = default;
};

// Protocol-side work and traffic counters for one round. Verification-side
// group operations are metered separately in OpCounts.
struct ProtocolCounters {
    std::uint64_t commit_ops = 0;
    std::uint64_t split_ops = 0;
    std::uint64_t reconstruct_ops = 0;
    std::uint64_t device_messages = 0;   // device outputs delivered to gateways
    std::uint64_t envelope_messages = 0; // share envelopes deposited
    std::uint64_t request_messages = 0;  // request broadcast, one per gateway
    std::uint64_t reveal_messages = 0;   // share broadcasts while revealing

    bool operator==(const ProtocolCounters&) const = default;
};

struct RoundResult {
    Transcript transcript;
    RandomRequest request;
    std::vector<RevealRecord> reveals;
    FinalResult final_result;
    GasReport gas_report;
    ProtocolCounters counters;
    std::size_t pool_entries = 0;
    std::size_t share_envelopes = 0;
};

// Honest device: entropy_bits uniform bits from its seeded source, signed.
DeviceOutput device_generate(Rng& device_rng, const SecretKey& signing_key, std::uint32_t device_id,
                             std::uint32_t entropy_bits);

// Compromised device emitting exactly the adversary's target. The signature
// is still valid: the device is subverted, its key is not stolen.
DeviceOutput biased_device_generate(const SecretKey& signing_key, std::uint32_t device_id,
                                    std::uint32_t entropy_bits, const BigInt& target);

// Compromised device that suppresses outputs its rule disfavors; nullopt
// means nothing is sent for this slot.
std::optional<DeviceOutput> discarding_device_generate(Rng& device_rng, const SecretKey& signing_key,
                                                       std::uint32_t device_id, std::uint32_t entropy_bits,
                                                       DiscardRule rule, const BigInt& target);

struct GatewayProcessed {
    bool accepted = false;
    std::string skip_reason; // set when accepted is false
    Opening opening;
    Commitment commitment;
    std::vector<std::uint8_t> capsule;
    ShareSet shares;
};

// One device output through a gateway: verify the signature, reduce the bits
// to a field element, commit under fresh blinding, seal the bits capsule, and
// split the opening into k shares.
GatewayProcessed gateway_process_output(const Group& group, const SystemConfig& config, Rng& gateway_rng,
                                        const DeviceOutput& output, const PublicKey& device_key,
                                        std::uint32_t round_id, std::uint32_t gateway_id,
                                        std::uint32_t sequence);

std::vector<std::uint8_t> seal_share_envelope(const BoxKey& recipient_key, std::uint64_t entry_id,
                                              std::uint32_t recipient_gateway, const Share& share);
// Throws ParseError when the ciphertext does not authenticate or decode.
Share open_share_envelope(const BoxKey& recipient_key, std::uint64_t entry_id, std::uint32_t recipient_gateway,
                          std::span<const std::uint8_t> ciphertext);

// Entry selection. Honest dApps walk the gateways round-robin in publication
// order; colluding dApps try compromised-gateway entries first and pad with
// honest ones only when the colluders alone cannot fill the request.
RandomRequest build_request(const Pool& pool, const SystemConfig& config, std::uint32_t round_id,
                            DappStrategy strategy, const std::set<std::uint32_t>& colluding_gateways);

// Executes one full round: SETUP -> PUBLISH -> REQUEST -> RESPOND ->
// CONSTRUCT, each phase finishing before the next starts. Deterministic in
// (config, adversary): reruns produce byte-identical transcripts. Throws
// InvalidConfig/InvalidAdversary up front and RoundFailed when the round
// cannot produce an accepted value.
RoundResult run_round(const SystemConfig& config, const AdversarySpec& adversary);

} // namespace hrng
