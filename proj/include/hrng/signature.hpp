#pragma once

#include "hrng/rng.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace hrng {

inline constexpr std::size_t kPublicKeyBytes = 32;
inline constexpr std::size_t kSecretKeyBytes = 64;
inline constexpr std::size_t kSignatureBytes = 64;

struct PublicKey {
    std::array<std::uint8_t, kPublicKeyBytes> data{};

    bool operator==(const PublicKey&) const = default;
};

struct SecretKey {
    std::array<std::uint8_t, kSecretKeyBytes> data{};
};

struct KeyPair {
    PublicKey public_key;
    SecretKey secret_key;
};

struct Signature {
    std::array<std::uint8_t, kSignatureBytes> data{};

    bool operator==(const Signature&) const = default;
};

KeyPair keygen(Rng& rng);
KeyPair keygen_from_seed(std::span<const std::uint8_t> seed32);

Signature sign(const SecretKey& key, std::span<const std::uint8_t> message);
bool verify_sig(const PublicKey& key, std::span<const std::uint8_t> message, const Signature& sig);

} // namespace hrng
