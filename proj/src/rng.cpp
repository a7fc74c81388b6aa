#include "hrng/rng.hpp"

#include "hrng/error.hpp"

#include <sodium.h>

#include <cstring>

namespace hrng {

namespace {

void ensure_sodium() {
    if (sodium_init() < 0) {
        throw Error(ErrorCode::IoError, "libsodium initialization failed");
    }
}

std::array<std::uint8_t, 32> root_key(std::uint64_t seed) {
    ensure_sodium();
    std::uint8_t le[8];
    for (int i = 0; i < 8; ++i) {
        le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    }
    std::array<std::uint8_t, 32> key{};
    crypto_generichash(key.data(), key.size(), le, sizeof(le), nullptr, 0);
    return key;
}

} // namespace

Rng::Rng(std::uint64_t seed) : key_(root_key(seed)) {}

Rng::Rng(const std::array<std::uint8_t, 32>& key) : key_(key) {}

Rng Rng::stream(std::string_view label) const {
    std::array<std::uint8_t, 32> derived{};
    crypto_generichash(derived.data(), derived.size(),
                       reinterpret_cast<const std::uint8_t*>(label.data()), label.size(),
                       key_.data(), key_.size());
    return Rng(derived);
}

void Rng::refill() {
    std::uint8_t msg[8];
    for (int i = 0; i < 8; ++i) {
        msg[i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
    }
    crypto_generichash(block_.data(), block_.size(), msg, sizeof(msg), key_.data(), key_.size());
    ++counter_;
    pos_ = 0;
}

void Rng::fill(std::uint8_t* out, std::size_t n) {
    while (n > 0) {
        if (pos_ == block_.size()) {
            refill();
        }
        std::size_t take = std::min(n, block_.size() - pos_);
        std::memcpy(out, block_.data() + pos_, take);
        pos_ += take;
        out += take;
        n -= take;
    }
}

std::uint64_t Rng::next_u64() {
    std::uint8_t buf[8];
    fill(buf, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = v << 8 | buf[i];
    }
    return v;
}

std::uint64_t Rng::below_u64(std::uint64_t bound) {
    if (bound == 0) {
        throw Error(ErrorCode::ParseError, "below_u64 with zero bound");
    }
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) {
            return v % bound;
        }
    }
}

BigInt Rng::below(const BigInt& bound) {
    if (bound <= 0) {
        throw Error(ErrorCode::ParseError, "below with non-positive bound");
    }
    std::size_t nbits = ceil_log2(bound + 1);
    for (;;) {
        BigInt v = bits(nbits).to_bigint();
        if (v < bound) {
            return v;
        }
    }
}

BitString Rng::bits(std::size_t bit_count) {
    std::vector<std::uint8_t> buf((bit_count + 7) / 8);
    fill(buf.data(), buf.size());
    return BitString::from_bigint(from_bytes(buf.data(), buf.size()), bit_count);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view label) {
    Rng derived = Rng(base_seed).stream(label);
    return derived.next_u64();
}

} // namespace hrng
