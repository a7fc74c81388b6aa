#include "hrng/hash.hpp"

#include "hrng/error.hpp"

#include <sodium.h>

namespace hrng {

namespace {

void ensure_sodium() {
    if (sodium_init() < 0) {
        throw Error(ErrorCode::IoError, "libsodium initialization failed");
    }
}

static_assert(sizeof(crypto_generichash_state) <= 384);

crypto_generichash_state* as_state(std::array<std::uint8_t, 384>& buf) {
    return reinterpret_cast<crypto_generichash_state*>(buf.data());
}

} // namespace

Digest blake2b256(std::span<const std::uint8_t> data) {
    ensure_sodium();
    Digest out{};
    crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
    return out;
}

Hasher::Hasher() : state_{} {
    ensure_sodium();
    crypto_generichash_init(as_state(state_), nullptr, 0, 32);
}

Hasher& Hasher::update(std::span<const std::uint8_t> data) {
    crypto_generichash_update(as_state(state_), data.data(), data.size());
    return *this;
}

Hasher& Hasher::update(std::string_view text) {
    return update(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Digest Hasher::finish() {
    Digest out{};
    crypto_generichash_final(as_state(state_), out.data(), out.size());
    return out;
}

} // namespace hrng
