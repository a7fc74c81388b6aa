#include "hrng/chain_verifier.hpp"
#include "hrng/error.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace hrng;

namespace {

struct Scenario {
    std::shared_ptr<const Group> group;
    SystemConfig config;
    Pool pool;
    DeviceKeyRegistry registry;
    std::vector<KeyPair> device_keys; // slot (g-1)*n_i + (d-1)
    RandomRequest request;
    std::vector<RevealRecord> reveals;

    const KeyPair& keys_for(std::uint32_t gateway, std::uint32_t device) const {
        return device_keys[(gateway - 1) * 2 + (device - 1)];
    }
};

// ell entries spread round-robin over the 4 gateways, each with a valid
// opening, shares from gateways 1 and 2, raw bits and a device signature.
Scenario make_scenario(AggregationMethod method, std::uint32_t ell, std::uint64_t seed) {
    Scenario s;
    s.group = make_test_group();
    s.config.group_name = "test11";
    s.config.entropy_bits = 68;
    s.config.ell = ell;
    s.config.aggregation = method;
    s.registry = DeviceKeyRegistry(4, 2);

    Rng rng(seed);
    for (std::uint32_t g = 1; g <= 4; ++g) {
        for (std::uint32_t d = 1; d <= 2; ++d) {
            Rng key_rng = rng.stream("key/" + std::to_string(g) + "/" + std::to_string(d));
            KeyPair pair = keygen(key_rng);
            s.registry.set(g, d, pair.public_key);
            s.device_keys.push_back(pair);
        }
    }

    s.pool.advance_phase(1, Phase::Publish);
    s.request.request_id = 1;
    s.request.round_id = 1;
    s.request.aggregation_method = method;
    s.request.requester = "dapp";

    const BigInt p = s.group->order();
    for (std::uint32_t i = 1; i <= ell; ++i) {
        std::uint32_t gateway = (i - 1) % 4 + 1;
        std::uint32_t device = 1;
        Opening opening{rng.below(p), rng.below(p)};

        PoolEntry entry;
        entry.round_id = 1;
        entry.gateway_id = gateway;
        entry.device_id = device;
        entry.sequence = (i - 1) / 4 + 1;
        entry.commitment = commit(*s.group, opening);
        std::uint64_t id = s.pool.publish(entry);
        s.request.selected_entries.push_back(id);

        RevealRecord reveal;
        reveal.entry_id = id;
        reveal.opening = opening;
        ShareSet shares = split(opening, s.config.t, s.config.k, p, rng);
        reveal.contributing_shares = {{1, shares.shares[0]}, {2, shares.shares[1]}};
        // raw bits: anything that reduces to the message
        reveal.raw_bits =
            BitString::from_bigint(opening.message + p * BigInt(rng.below_u64(1000)), s.config.entropy_bits);
        reveal.device_signature = sign(s.keys_for(gateway, device).secret_key, reveal.raw_bits.bytes());
        s.reveals.push_back(std::move(reveal));
    }
    return s;
}

AggregateOutcome run(Scenario& s, bool with_keys = true) {
    const DeviceKeyRegistry* keys = with_keys ? &s.registry : nullptr;
    if (s.request.aggregation_method == AggregationMethod::Xor) {
        return aggregate_non_optimized(*s.group, s.request, s.reveals, s.pool, s.config, keys);
    }
    return aggregate_optimized(*s.group, s.request, s.reveals, s.pool, s.config, keys);
}

// re-share a tampered opening so the per-entry share check stays consistent
void reshare(Scenario& s, std::size_t reveal_index, std::uint64_t seed) {
    RevealRecord& reveal = s.reveals[reveal_index];
    Rng rng(seed);
    ShareSet shares = split(reveal.opening, s.config.t, s.config.k, s.group->order(), rng);
    reveal.contributing_shares = {{1, shares.shares[0]}, {2, shares.shares[1]}};
}

} // namespace

TEST_CASE("request admission accepts a diverse selection") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 1);
    Verdict v = validate_request(s.request, s.pool, s.config);
    CHECK(v.accepted);
}

TEST_CASE("request admission rejects bad selections") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 2);

    RandomRequest short_request = s.request;
    short_request.selected_entries.pop_back();
    Verdict v = validate_request(short_request, s.pool, s.config);
    CHECK(!v.accepted);
    CHECK(v.reason == reject::kWrongArity);

    RandomRequest dup = s.request;
    dup.selected_entries[2] = dup.selected_entries[0];
    v = validate_request(dup, s.pool, s.config);
    CHECK(!v.accepted);
    CHECK(v.reason == reject::kDuplicateSelection);

    RandomRequest unknown = s.request;
    unknown.selected_entries[2] = 99;
    v = validate_request(unknown, s.pool, s.config);
    CHECK(!v.accepted);
    CHECK(v.reason == reject::kUnknownEntrySelection);
}

TEST_CASE("request admission rejects wrong-round entries") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 3);
    s.pool.advance_phase(2, Phase::Publish);
    PoolEntry stray;
    stray.round_id = 2;
    stray.gateway_id = 1;
    stray.device_id = 1;
    stray.sequence = 9;
    stray.commitment = commit(*s.group, Opening{BigInt(1), BigInt(1)});
    std::uint64_t stray_id = s.pool.publish(stray);

    RandomRequest request = s.request;
    request.selected_entries[2] = stray_id;
    Verdict v = validate_request(request, s.pool, s.config);
    CHECK(!v.accepted);
    CHECK(v.reason == reject::kWrongRound);
}

TEST_CASE("request admission enforces gateway diversity") {
    // all entries behind gateway 1
    Scenario s = make_scenario(AggregationMethod::Xor, 1, 4);
    Rng rng(40);
    for (std::uint32_t seq = 2; seq <= 3; ++seq) {
        PoolEntry entry;
        entry.round_id = 1;
        entry.gateway_id = 1;
        entry.device_id = 1;
        entry.sequence = seq;
        entry.commitment = commit(*s.group, Opening{rng.below(BigInt(11)), rng.below(BigInt(11))});
        s.pool.publish(entry);
    }
    RandomRequest request = s.request;
    request.selected_entries = {1, 2, 3};
    s.config.ell = 3;

    Verdict v = validate_request(request, s.pool, s.config);
    CHECK(!v.accepted);
    CHECK(v.reason == reject::kGatewayDiversity);

    // the sabotaged deployment skips the check
    CHECK(validate_request(request, s.pool, s.config, true).accepted);
}

TEST_CASE("device key registry bounds") {
    DeviceKeyRegistry registry(2, 2);
    PublicKey key;
    key.data[0] = 7;
    registry.set(2, 1, key);
    CHECK(registry.get(2, 1) == key);
    CHECK_THROWS_AS((void)registry.get(0, 1), Error);
    CHECK_THROWS_AS((void)registry.get(3, 1), Error);
    CHECK_THROWS_AS((void)registry.get(1, 3), Error);
}

TEST_CASE("xor aggregation accepts an honest round and meters exactly") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 5);
    AggregateOutcome outcome = run(s);
    REQUIRE(outcome.verdict.accepted);
    CHECK(outcome.result.mode == VerifierMode::NonOptimized);
    CHECK(outcome.result.ops.ecadd == 3);
    CHECK(outcome.result.ops.ecmul == 6);
    CHECK(outcome.result.ops.addmod == 2);
    CHECK(outcome.result.ops.mulmod == 0);
    CHECK(price(outcome.result.ops, s.config.gas_schedule) == closed_form(VerifierMode::NonOptimized, 3));

    BitString expected = s.reveals[0].raw_bits.xor_with(s.reveals[1].raw_bits).xor_with(s.reveals[2].raw_bits);
    CHECK(outcome.result.value_bits == expected);
}

TEST_CASE("optimized aggregation accepts an honest round and meters exactly") {
    Scenario s = make_scenario(AggregationMethod::SumModP, 4, 6);
    AggregateOutcome outcome = run(s);
    REQUIRE(outcome.verdict.accepted);
    CHECK(outcome.result.mode == VerifierMode::Optimized);
    CHECK(outcome.result.ops.ecadd == 4);
    CHECK(outcome.result.ops.ecmul == 2);
    CHECK(outcome.result.ops.addmod == 6);
    CHECK(outcome.result.ops.mulmod == 0);
    CHECK(price(outcome.result.ops, s.config.gas_schedule) == closed_form(VerifierMode::Optimized, 4));

    BigInt expected = 0;
    for (const RevealRecord& r : s.reveals) {
        expected = mod_reduce(expected + r.opening.message, BigInt(11));
    }
    CHECK(outcome.result.value_scalar == expected);
}

TEST_CASE("single-entry aggregation is degenerate but priced") {
    Scenario x = make_scenario(AggregationMethod::Xor, 1, 7);
    AggregateOutcome xo = run(x);
    REQUIRE(xo.verdict.accepted);
    CHECK(xo.result.value_bits == x.reveals[0].raw_bits);
    CHECK(price(xo.result.ops, x.config.gas_schedule) == 12150);

    Scenario o = make_scenario(AggregationMethod::SumModP, 1, 8);
    AggregateOutcome oo = run(o);
    REQUIRE(oo.verdict.accepted);
    CHECK(oo.result.value_scalar == o.reveals[0].opening.message);
    CHECK(price(oo.result.ops, o.config.gas_schedule) == 12150);
}

TEST_CASE("known tiny-group sum") {
    Scenario s = make_scenario(AggregationMethod::SumModP, 2, 9);
    // overwrite with the fixture openings (3,2) and (4,5); combined element 3
    Pool fresh;
    fresh.advance_phase(1, Phase::Publish);
    Opening a{BigInt(3), BigInt(2)};
    Opening b{BigInt(4), BigInt(5)};
    std::vector<Opening> openings{a, b};
    Rng rng(90);
    for (std::uint32_t i = 0; i < 2; ++i) {
        PoolEntry entry;
        entry.round_id = 1;
        entry.gateway_id = i + 1;
        entry.device_id = 1;
        entry.sequence = 1;
        entry.commitment = commit(*s.group, openings[i]);
        fresh.publish(entry);
        s.reveals[i].opening = openings[i];
        ShareSet shares = split(openings[i], 2, 4, BigInt(11), rng);
        s.reveals[i].contributing_shares = {{1, shares.shares[0]}, {2, shares.shares[1]}};
        s.reveals[i].raw_bits = BitString::from_bigint(openings[i].message, 68);
        s.reveals[i].device_signature =
            sign(s.keys_for(i + 1, 1).secret_key, s.reveals[i].raw_bits.bytes());
    }
    s.pool = std::move(fresh);
    AggregateOutcome outcome = run(s);
    REQUIRE(outcome.verdict.accepted);
    CHECK(outcome.result.value_scalar == 7);
}

TEST_CASE("known xor value") {
    Scenario s = make_scenario(AggregationMethod::Xor, 2, 10);
    Pool fresh;
    fresh.advance_phase(1, Phase::Publish);
    std::vector<std::uint64_t> values{0b1010, 0b0110};
    Rng rng(91);
    for (std::uint32_t i = 0; i < 2; ++i) {
        Opening opening{BigInt(values[i]) % 11, rng.below(BigInt(11))};
        PoolEntry entry;
        entry.round_id = 1;
        entry.gateway_id = i + 1;
        entry.device_id = 1;
        entry.sequence = 1;
        entry.commitment = commit(*s.group, opening);
        fresh.publish(entry);
        s.reveals[i].opening = opening;
        ShareSet shares = split(opening, 2, 4, BigInt(11), rng);
        s.reveals[i].contributing_shares = {{1, shares.shares[0]}, {2, shares.shares[1]}};
        s.reveals[i].raw_bits = BitString::from_uint(values[i], 68);
        s.reveals[i].device_signature =
            sign(s.keys_for(i + 1, 1).secret_key, s.reveals[i].raw_bits.bytes());
    }
    s.pool = std::move(fresh);
    AggregateOutcome outcome = run(s);
    REQUIRE(outcome.verdict.accepted);
    CHECK(outcome.result.value_bits.to_bigint() == 0b1100);
}

TEST_CASE("method and mode must pair up") {
    Scenario s = make_scenario(AggregationMethod::Xor, 2, 11);
    AggregateOutcome outcome = aggregate_optimized(*s.group, s.request, s.reveals, s.pool, s.config, nullptr);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kUnsupportedAggregation);

    Scenario o = make_scenario(AggregationMethod::SumModP, 2, 12);
    outcome = aggregate_non_optimized(*o.group, o.request, o.reveals, o.pool, o.config, nullptr);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kUnsupportedAggregation);
}

TEST_CASE("reveals must line up with the selection") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 13);
    std::swap(s.reveals[0], s.reveals[1]);
    AggregateOutcome outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kRevealMismatch);

    Scenario missing = make_scenario(AggregationMethod::Xor, 3, 14);
    missing.reveals.pop_back();
    outcome = run(missing);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kRevealMismatch);
}

TEST_CASE("unpublished selection surfaces during aggregation") {
    Scenario s = make_scenario(AggregationMethod::Xor, 2, 15);
    s.request.selected_entries[1] = 99;
    s.reveals[1].entry_id = 99;
    AggregateOutcome outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kUnknownEntrySelection);
}

TEST_CASE("tampered opening is caught per entry in xor mode") {
    Scenario s = make_scenario(AggregationMethod::Xor, 3, 16);
    s.reveals[1].opening.message = mod_reduce(s.reveals[1].opening.message + 1, BigInt(11));
    reshare(s, 1, 160); // shares consistent with the lie, commitment is not
    s.reveals[1].raw_bits = BitString::from_bigint(s.reveals[1].opening.message, 68);
    s.reveals[1].device_signature =
        sign(s.keys_for(2, 1).secret_key, s.reveals[1].raw_bits.bytes());
    AggregateOutcome outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadOpening);
    CHECK(outcome.verdict.detail.find("entry 2") != std::string::npos);
}

TEST_CASE("optimized mode catches a blinding lie at the combined opening") {
    Scenario s = make_scenario(AggregationMethod::SumModP, 3, 17);
    s.reveals[2].opening.blinding = mod_reduce(s.reveals[2].opening.blinding + 1, BigInt(11));
    reshare(s, 2, 170);
    // message unchanged: raw bits and signature still verify
    AggregateOutcome outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadAggregateOpening);
    CHECK(outcome.verdict.detail.find("culprit entry 3") != std::string::npos);
}

TEST_CASE("share checks catch inconsistent contributions") {
    Scenario s = make_scenario(AggregationMethod::Xor, 2, 18);

    Scenario few = make_scenario(AggregationMethod::Xor, 2, 18);
    few.reveals[0].contributing_shares.pop_back();
    AggregateOutcome outcome = run(few);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadShareReconstruction);

    Scenario wrong_gateway = make_scenario(AggregationMethod::Xor, 2, 18);
    wrong_gateway.reveals[0].contributing_shares[1].first = 3; // share index still 2
    outcome = run(wrong_gateway);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadShareReconstruction);

    s.reveals[0].contributing_shares[1].second.message_part =
        mod_reduce(s.reveals[0].contributing_shares[1].second.message_part + 1, BigInt(11));
    outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadShareReconstruction);
}

TEST_CASE("raw bits must match the committed message") {
    Scenario width = make_scenario(AggregationMethod::Xor, 2, 19);
    width.reveals[0].raw_bits = width.reveals[0].raw_bits.truncate(60);
    AggregateOutcome outcome = run(width, false);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kRawBitsMismatch);

    Scenario value = make_scenario(AggregationMethod::Xor, 2, 20);
    value.reveals[0].raw_bits =
        BitString::from_bigint(mod_reduce(value.reveals[0].opening.message + 1, BigInt(11)), 68);
    outcome = run(value, false);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kRawBitsMismatch);
}

TEST_CASE("device signatures are enforced when keys are registered") {
    Scenario s = make_scenario(AggregationMethod::Xor, 2, 21);
    s.reveals[1].device_signature.data[0] ^= 0x01;
    AggregateOutcome outcome = run(s);
    CHECK(!outcome.verdict.accepted);
    CHECK(outcome.verdict.reason == reject::kBadDeviceSignature);
    // and skipped without a registry
    CHECK(run(s, false).verdict.accepted);
}

TEST_CASE("optimized acceptance tracks the sum across openings") {
    // one honest entry fixed, the other swept over all (m, r)
    auto group = make_test_group();
    Rng rng(22);
    for (int m = 0; m < 11; ++m) {
        for (int r = 0; r < 11; ++r) {
            Scenario s = make_scenario(AggregationMethod::SumModP, 2, 23);
            Pool fresh;
            fresh.advance_phase(1, Phase::Publish);
            Opening first{BigInt(m), BigInt(r)};
            Opening second{BigInt(4), BigInt(5)};
            std::vector<Opening> openings{first, second};
            for (std::uint32_t i = 0; i < 2; ++i) {
                PoolEntry entry;
                entry.round_id = 1;
                entry.gateway_id = i + 1;
                entry.device_id = 1;
                entry.sequence = 1;
                entry.commitment = commit(*group, openings[i]);
                fresh.publish(entry);
                s.reveals[i].opening = openings[i];
                ShareSet shares = split(openings[i], 2, 4, BigInt(11), rng);
                s.reveals[i].contributing_shares = {{1, shares.shares[0]}, {2, shares.shares[1]}};
                s.reveals[i].raw_bits = BitString::from_bigint(openings[i].message, 68);
            }
            s.pool = std::move(fresh);
            AggregateOutcome outcome =
                aggregate_optimized(*group, s.request, s.reveals, s.pool, s.config, nullptr);
            REQUIRE(outcome.verdict.accepted);
            CHECK(outcome.result.value_scalar == (m + 4) % 11);
        }
    }
}

TEST_CASE("synthetic measurement matches the formulas across arities") {
    GasSchedule prices;
    for (std::uint32_t ell : {1u, 2u, 3u, 12u, 32u}) {
        OpCounts nonopt = measure_verifier_ops(VerifierMode::NonOptimized, ell);
        CHECK(nonopt.ecadd == ell);
        CHECK(nonopt.ecmul == 2 * static_cast<std::uint64_t>(ell));
        CHECK(nonopt.addmod == ell - 1);
        CHECK(price(nonopt, prices) == closed_form(VerifierMode::NonOptimized, ell));

        OpCounts opt = measure_verifier_ops(VerifierMode::Optimized, ell);
        CHECK(opt.ecadd == ell);
        CHECK(opt.ecmul == 2);
        CHECK(opt.addmod == 2 * static_cast<std::uint64_t>(ell - 1));
        CHECK(price(opt, prices) == closed_form(VerifierMode::Optimized, ell));
    }
}
