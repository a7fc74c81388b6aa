#include "hrng/secretbox.hpp"

#include "hrng/error.hpp"

#include <sodium.h>

namespace hrng {

std::vector<std::uint8_t> box_seal(const BoxKey& key, const BoxNonce& nonce,
                                   std::span<const std::uint8_t> plaintext) {
    if (sodium_init() < 0) {
        throw Error(ErrorCode::IoError, "libsodium initialization failed");
    }
    std::vector<std::uint8_t> out(plaintext.size() + crypto_secretbox_MACBYTES);
    crypto_secretbox_easy(out.data(), plaintext.data(), plaintext.size(), nonce.data(), key.data());
    return out;
}

std::optional<std::vector<std::uint8_t>> box_open(const BoxKey& key, const BoxNonce& nonce,
                                                  std::span<const std::uint8_t> ciphertext) {
    if (ciphertext.size() < crypto_secretbox_MACBYTES) {
        return std::nullopt;
    }
    std::vector<std::uint8_t> out(ciphertext.size() - crypto_secretbox_MACBYTES);
    if (crypto_secretbox_open_easy(out.data(), ciphertext.data(), ciphertext.size(), nonce.data(), key.data()) != 0) {
        return std::nullopt;
    }
    return out;
}

} // namespace hrng
