#pragma once

#include "hrng/bitstring.hpp"
#include "hrng/pedersen.hpp"
#include "hrng/secretbox.hpp"
#include "hrng/signature.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hrng {

// Each pool entry carries its device's raw bits and signature sealed under a
// key derived from the entry's opening. Nobody learns the bits early, but any
// party that reconstructs (m, r) from threshold shares can recover them, so a
// reveal does not depend on the publishing gateway's cooperation.

struct CapsuleContents {
    BitString raw_bits;
    Signature device_signature;

    bool operator==(const CapsuleContents&) const = default;
};

BoxKey derive_capsule_key(const Opening& opening, std::uint32_t round_id, std::uint32_t gateway_id,
                          std::uint32_t device_id, std::uint32_t sequence);

std::vector<std::uint8_t> seal_capsule(const BoxKey& key, const CapsuleContents& contents);

// nullopt when the key is wrong or the blob is malformed.
std::optional<CapsuleContents> open_capsule(const BoxKey& key, std::span<const std::uint8_t> ciphertext);

} // namespace hrng
