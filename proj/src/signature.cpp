#include "hrng/signature.hpp"

#include "hrng/error.hpp"

#include <sodium.h>

namespace hrng {

KeyPair keygen(Rng& rng) {
    std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
    rng.fill(seed.data(), seed.size());
    return keygen_from_seed(seed);
}

KeyPair keygen_from_seed(std::span<const std::uint8_t> seed32) {
    if (sodium_init() < 0) {
        throw Error(ErrorCode::IoError, "libsodium initialization failed");
    }
    if (seed32.size() != crypto_sign_SEEDBYTES) {
        throw Error(ErrorCode::ParseError, "signing seed must be 32 bytes");
    }
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_key.data.data(), kp.secret_key.data.data(), seed32.data());
    return kp;
}

Signature sign(const SecretKey& key, std::span<const std::uint8_t> message) {
    Signature sig;
    crypto_sign_detached(sig.data.data(), nullptr, message.data(), message.size(), key.data.data());
    return sig;
}

bool verify_sig(const PublicKey& key, std::span<const std::uint8_t> message, const Signature& sig) {
    return crypto_sign_verify_detached(sig.data.data(), message.data(), message.size(), key.data.data()) == 0;
}

} // namespace hrng
