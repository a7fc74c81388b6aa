#include "hrng/chain_verifier.hpp"

#include "hrng/error.hpp"
#include "hrng/rng.hpp"
#include "hrng/scalar_codec.hpp"
#include "hrng/shamir.hpp"

#include <set>
#include <string>

namespace hrng {

VerifierMode verifier_mode_for(AggregationMethod method) {
    return method == AggregationMethod::Xor ? VerifierMode::NonOptimized : VerifierMode::Optimized;
}

DeviceKeyRegistry::DeviceKeyRegistry(std::uint32_t n_g, std::uint32_t n_i)
    : n_g_(n_g), n_i_(n_i), keys_(static_cast<std::size_t>(n_g) * n_i) {}

void DeviceKeyRegistry::set(std::uint32_t gateway_id, std::uint32_t device_id, const PublicKey& key) {
    keys_.at((gateway_id - 1) * static_cast<std::size_t>(n_i_) + (device_id - 1)) = key;
}

const PublicKey& DeviceKeyRegistry::get(std::uint32_t gateway_id, std::uint32_t device_id) const {
    if (gateway_id < 1 || gateway_id > n_g_ || device_id < 1 || device_id > n_i_) {
        throw Error(ErrorCode::UnknownEntry, "no registered key for gateway " + std::to_string(gateway_id) +
                                                 " device " + std::to_string(device_id));
    }
    return keys_[(gateway_id - 1) * static_cast<std::size_t>(n_i_) + (device_id - 1)];
}

Verdict validate_request(const RandomRequest& request, const Pool& pool, const SystemConfig& config,
                         bool skip_diversity) {
    if (request.aggregation_method != AggregationMethod::Xor &&
        request.aggregation_method != AggregationMethod::SumModP) {
        return Verdict::fail(reject::kUnsupportedAggregation, "unrecognized aggregation method");
    }
    if (request.selected_entries.size() != config.ell) {
        return Verdict::fail(reject::kWrongArity, "selected " + std::to_string(request.selected_entries.size()) +
                                                      " entries, need " + std::to_string(config.ell));
    }
    std::set<std::uint64_t> ids;
    std::set<std::uint32_t> gateways;
    for (std::uint64_t id : request.selected_entries) {
        if (!ids.insert(id).second) {
            return Verdict::fail(reject::kDuplicateSelection, "entry " + std::to_string(id) + " selected twice");
        }
        const PoolEntry* entry = nullptr;
        try {
            entry = &pool.get(id);
        } catch (const Error&) {
            return Verdict::fail(reject::kUnknownEntrySelection, "entry " + std::to_string(id) + " not published");
        }
        if (entry->round_id != request.round_id) {
            return Verdict::fail(reject::kWrongRound, "entry " + std::to_string(id) + " belongs to round " +
                                                          std::to_string(entry->round_id));
        }
        gateways.insert(entry->gateway_id);
    }
    if (!skip_diversity && gateways.size() < static_cast<std::size_t>(config.n_mg) + 1) {
        return Verdict::fail(reject::kGatewayDiversity,
                             "entries span " + std::to_string(gateways.size()) + " gateways, need at least " +
                                 std::to_string(config.n_mg + 1));
    }
    return Verdict::ok();
}

namespace {

// The commitment recomputation the contract performs for an opening:
// two scalar multiplications and one group addition, metered when asked.
GroupElement metered_commit(const Group& group, const Opening& opening, OpCounts* meter) {
    GroupElement gm = group.scalar_mul(group.g(), opening.message);
    GroupElement hr = group.scalar_mul(group.h(), opening.blinding);
    GroupElement c = group.op(gm, hr);
    if (meter != nullptr) {
        meter->ecmul += 2;
        meter->ecadd += 1;
    }
    return c;
}

} // namespace

Verdict check_reveal(const Group& group, const RevealRecord& reveal, const PoolEntry& entry,
                     const SystemConfig& config, const PublicKey* device_key,
                     const RevealCheckOptions& options) {
    const std::string tag = "entry " + std::to_string(entry.entry_id);

    if (options.check_opening) {
        GroupElement recomputed = metered_commit(group, reveal.opening, options.meter);
        if (!(recomputed == entry.commitment.element)) {
            return Verdict::fail(reject::kBadOpening, tag + ": opening does not match the commitment");
        }
    }

    if (reveal.contributing_shares.size() < config.t) {
        return Verdict::fail(reject::kBadShareReconstruction,
                             tag + ": only " + std::to_string(reveal.contributing_shares.size()) +
                                 " contributing shares, threshold is " + std::to_string(config.t));
    }
    std::vector<Share> shares;
    shares.reserve(reveal.contributing_shares.size());
    for (const auto& [gateway_id, share] : reveal.contributing_shares) {
        if (share.index != gateway_id) {
            return Verdict::fail(reject::kBadShareReconstruction,
                                 tag + ": share index does not match contributing gateway");
        }
        shares.push_back(share);
    }
    try {
        Opening reconstructed = reconstruct(shares, config.t, group.order());
        if (!(reconstructed.message == reveal.opening.message &&
              reconstructed.blinding == reveal.opening.blinding)) {
            return Verdict::fail(reject::kBadShareReconstruction,
                                 tag + ": shares reconstruct a different opening");
        }
    } catch (const Error& e) {
        return Verdict::fail(reject::kBadShareReconstruction, tag + ": " + e.what());
    }

    if (reveal.raw_bits.bit_count() != config.entropy_bits) {
        return Verdict::fail(reject::kRawBitsMismatch, tag + ": raw bits carry " +
                                                           std::to_string(reveal.raw_bits.bit_count()) +
                                                           " bits, expected " +
                                                           std::to_string(config.entropy_bits));
    }
    try {
        BigInt reduced = bits_to_scalar(reveal.raw_bits, group.order(), config.scalar_margin);
        if (reduced != mod_reduce(reveal.opening.message, group.order())) {
            return Verdict::fail(reject::kRawBitsMismatch, tag + ": raw bits do not reduce to the message");
        }
    } catch (const Error& e) {
        return Verdict::fail(reject::kRawBitsMismatch, tag + ": " + e.what());
    }

    if (device_key != nullptr && !verify_sig(*device_key, reveal.raw_bits.bytes(), reveal.device_signature)) {
        return Verdict::fail(reject::kBadDeviceSignature, tag + ": device signature does not verify");
    }

    return Verdict::ok();
}

namespace {

Verdict match_reveals(const RandomRequest& request, std::span<const RevealRecord> reveals) {
    if (reveals.size() != request.selected_entries.size()) {
        return Verdict::fail(reject::kRevealMismatch, "have " + std::to_string(reveals.size()) +
                                                          " reveals for " +
                                                          std::to_string(request.selected_entries.size()) +
                                                          " selected entries");
    }
    for (std::size_t i = 0; i < reveals.size(); ++i) {
        if (reveals[i].entry_id != request.selected_entries[i]) {
            return Verdict::fail(reject::kRevealMismatch,
                                 "reveal " + std::to_string(i) + " is for entry " +
                                     std::to_string(reveals[i].entry_id) + ", request selected " +
                                     std::to_string(request.selected_entries[i]));
        }
    }
    return Verdict::ok();
}

const PoolEntry* lookup(const Pool& pool, std::uint64_t id, Verdict& verdict) {
    try {
        return &pool.get(id);
    } catch (const Error&) {
        verdict = Verdict::fail(reject::kUnknownEntrySelection, "entry " + std::to_string(id) + " not published");
        return nullptr;
    }
}

const PublicKey* key_for(const DeviceKeyRegistry* keys, const PoolEntry& entry) {
    return keys == nullptr ? nullptr : &keys->get(entry.gateway_id, entry.device_id);
}

} // namespace

AggregateOutcome aggregate_non_optimized(const Group& group, const RandomRequest& request,
                                         std::span<const RevealRecord> reveals, const Pool& pool,
                                         const SystemConfig& config, const DeviceKeyRegistry* device_keys) {
    AggregateOutcome out;
    if (request.aggregation_method != AggregationMethod::Xor) {
        out.verdict = Verdict::fail(reject::kUnsupportedAggregation,
                                    "non-optimized verification pairs with XOR aggregation");
        return out;
    }
    if (Verdict v = match_reveals(request, reveals); !v.accepted) {
        out.verdict = std::move(v);
        return out;
    }

    OpCounts ops;
    for (const RevealRecord& reveal : reveals) {
        const PoolEntry* entry = lookup(pool, reveal.entry_id, out.verdict);
        if (entry == nullptr) {
            return out;
        }
        Verdict v = check_reveal(group, reveal, *entry, config, key_for(device_keys, *entry),
                                 RevealCheckOptions{true, &ops});
        if (!v.accepted) {
            out.verdict = std::move(v);
            return out;
        }
    }

    BitString acc = reveals[0].raw_bits;
    for (std::size_t i = 1; i < reveals.size(); ++i) {
        acc = acc.xor_with(reveals[i].raw_bits);
        ++ops.addmod; // XOR folds are priced in the same 8-gas class
    }

    out.verdict = Verdict::ok();
    out.result.mode = VerifierMode::NonOptimized;
    out.result.value_bits = std::move(acc);
    out.result.ops = ops;
    return out;
}

AggregateOutcome aggregate_optimized(const Group& group, const RandomRequest& request,
                                     std::span<const RevealRecord> reveals, const Pool& pool,
                                     const SystemConfig& config, const DeviceKeyRegistry* device_keys) {
    AggregateOutcome out;
    if (request.aggregation_method != AggregationMethod::SumModP) {
        out.verdict = Verdict::fail(reject::kUnsupportedAggregation,
                                    "optimized verification pairs with SUM_MOD_P aggregation");
        return out;
    }
    if (Verdict v = match_reveals(request, reveals); !v.accepted) {
        out.verdict = std::move(v);
        return out;
    }

    std::vector<const PoolEntry*> entries;
    entries.reserve(reveals.size());
    for (const RevealRecord& reveal : reveals) {
        const PoolEntry* entry = lookup(pool, reveal.entry_id, out.verdict);
        if (entry == nullptr) {
            return out;
        }
        // Per-entry consistency runs off-meter; the opening itself is only
        // checked through the single combined verification below.
        Verdict v = check_reveal(group, reveal, *entry, config, key_for(device_keys, *entry),
                                 RevealCheckOptions{false, nullptr});
        if (!v.accepted) {
            out.verdict = std::move(v);
            return out;
        }
        entries.push_back(entry);
    }

    OpCounts ops;
    const BigInt& p = group.order();

    GroupElement combined = entries[0]->commitment.element;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        combined = group.op(combined, entries[i]->commitment.element);
        ++ops.ecadd;
    }

    BigInt message_sum = mod_reduce(reveals[0].opening.message, p);
    BigInt blinding_sum = mod_reduce(reveals[0].opening.blinding, p);
    for (std::size_t i = 1; i < reveals.size(); ++i) {
        message_sum = mod_reduce(message_sum + reveals[i].opening.message, p);
        ++ops.addmod;
        blinding_sum = mod_reduce(blinding_sum + reveals[i].opening.blinding, p);
        ++ops.addmod;
    }

    GroupElement expected = metered_commit(group, Opening{message_sum, blinding_sum}, &ops);
    if (!(expected == combined)) {
        std::string detail = "combined opening does not match the combined commitment";
        // Culprit sweep, off the metered path: the contract only pays for the
        // happy path, identification happens in a dispute flow.
        for (std::size_t i = 0; i < reveals.size(); ++i) {
            GroupElement c = metered_commit(group, reveals[i].opening, nullptr);
            if (!(c == entries[i]->commitment.element)) {
                detail += "; culprit entry " + std::to_string(entries[i]->entry_id);
                break;
            }
        }
        out.verdict = Verdict::fail(reject::kBadAggregateOpening, detail);
        return out;
    }

    out.verdict = Verdict::ok();
    out.result.mode = VerifierMode::Optimized;
    out.result.value_scalar = message_sum;
    out.result.ops = ops;
    return out;
}

OpCounts measure_verifier_ops(VerifierMode mode, std::uint32_t ell) {
    if (ell < 1) {
        throw Error(ErrorCode::InvalidArity, "ell must be at least 1");
    }
    const auto group_ptr = make_test_group();
    const Group& group = *group_ptr;
    const BigInt& p = group.params().order;

    SystemConfig config;
    config.group_name = "test11";
    config.n_g = 2;
    config.n_i = 1;
    config.n_r = 1;
    config.n_mg = 1;
    config.n_mi = 0;
    config.t = 2;
    config.k = 2;
    config.ell = ell;
    config.entropy_bits = 68;
    config.aggregation = mode == VerifierMode::NonOptimized ? AggregationMethod::Xor
                                                            : AggregationMethod::SumModP;

    Rng rng(derive_seed(42, "verifier-ops"));
    Pool pool;
    pool.advance_phase(1, Phase::Publish);

    RandomRequest request;
    request.request_id = 1;
    request.round_id = 1;
    request.aggregation_method = config.aggregation;
    request.requester = "bench";

    std::vector<RevealRecord> reveals;
    reveals.reserve(ell);
    for (std::uint32_t i = 1; i <= ell; ++i) {
        Opening opening{rng.below(p), rng.below(p)};
        PoolEntry entry;
        entry.round_id = 1;
        entry.gateway_id = (i - 1) % config.k + 1;
        entry.device_id = 1;
        entry.sequence = i;
        entry.commitment = commit(group, opening);
        std::uint64_t id = pool.publish(entry);
        request.selected_entries.push_back(id);

        RevealRecord reveal;
        reveal.entry_id = id;
        reveal.opening = opening;
        ShareSet shares = split(opening, config.t, config.k, p, rng);
        for (const Share& share : shares.shares) {
            reveal.contributing_shares.emplace_back(share.index, share);
        }
        reveal.raw_bits = BitString::from_bigint(opening.message, config.entropy_bits);
        reveals.push_back(std::move(reveal));
    }

    AggregateOutcome outcome = mode == VerifierMode::NonOptimized
                                   ? aggregate_non_optimized(group, request, reveals, pool, config, nullptr)
                                   : aggregate_optimized(group, request, reveals, pool, config, nullptr);
    if (!outcome.verdict.accepted) {
        throw Error(ErrorCode::RoundFailed,
                    "synthetic verification workload rejected: " + outcome.verdict.reason);
    }
    return outcome.result.ops;
}

} // namespace hrng
