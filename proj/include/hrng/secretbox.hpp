#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hrng {

inline constexpr std::size_t kBoxKeyBytes = 32;
inline constexpr std::size_t kBoxNonceBytes = 24;

using BoxKey = std::array<std::uint8_t, kBoxKeyBytes>;
using BoxNonce = std::array<std::uint8_t, kBoxNonceBytes>;

// Authenticated encryption; open returns nullopt when the ciphertext does not
// authenticate under the key.
std::vector<std::uint8_t> box_seal(const BoxKey& key, const BoxNonce& nonce, std::span<const std::uint8_t> plaintext);
std::optional<std::vector<std::uint8_t>> box_open(const BoxKey& key, const BoxNonce& nonce,
                                                  std::span<const std::uint8_t> ciphertext);

} // namespace hrng
