#include "hrng/capsule.hpp"

#include "hrng/hash.hpp"

#include <string>

namespace hrng {

namespace {

// The key never repeats (one opening per entry), so a fixed nonce is safe.
const BoxNonce kCapsuleNonce{};

} // namespace

BoxKey derive_capsule_key(const Opening& opening, std::uint32_t round_id, std::uint32_t gateway_id,
                          std::uint32_t device_id, std::uint32_t sequence) {
    std::string material = "hrng/capsule/v1|" + to_dec(opening.message) + "|" + to_dec(opening.blinding) + "|" +
                           std::to_string(round_id) + ":" + std::to_string(gateway_id) + ":" +
                           std::to_string(device_id) + ":" + std::to_string(sequence);
    Digest d = blake2b256(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(material.data()), material.size()));
    BoxKey key{};
    std::copy(d.begin(), d.end(), key.begin());
    return key;
}

std::vector<std::uint8_t> seal_capsule(const BoxKey& key, const CapsuleContents& contents) {
    std::vector<std::uint8_t> plain;
    const std::size_t bit_count = contents.raw_bits.bit_count();
    for (int shift = 24; shift >= 0; shift -= 8) {
        plain.push_back(static_cast<std::uint8_t>(bit_count >> shift));
    }
    const auto& bytes = contents.raw_bits.bytes();
    plain.insert(plain.end(), bytes.begin(), bytes.end());
    plain.insert(plain.end(), contents.device_signature.data.begin(), contents.device_signature.data.end());
    return box_seal(key, kCapsuleNonce, plain);
}

std::optional<CapsuleContents> open_capsule(const BoxKey& key, std::span<const std::uint8_t> ciphertext) {
    auto plain = box_open(key, kCapsuleNonce, ciphertext);
    if (!plain) {
        return std::nullopt;
    }
    if (plain->size() < 4) {
        return std::nullopt;
    }
    std::size_t bit_count = 0;
    for (int i = 0; i < 4; ++i) {
        bit_count = bit_count << 8 | (*plain)[i];
    }
    const std::size_t byte_count = (bit_count + 7) / 8;
    if (plain->size() != 4 + byte_count + kSignatureBytes) {
        return std::nullopt;
    }
    CapsuleContents out;
    out.raw_bits = BitString::from_bigint(from_bytes(plain->data() + 4, byte_count), bit_count);
    std::copy(plain->begin() + 4 + byte_count, plain->end(), out.device_signature.data.begin());
    return out;
}

} // namespace hrng
