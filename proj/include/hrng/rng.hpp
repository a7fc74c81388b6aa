#pragma once

#include "hrng/bigint.hpp"
#include "hrng/bitstring.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace hrng {

// Deterministic random stream: BLAKE2b in counter mode under a 32-byte key.
// Streams are derived by name from a root seed, so every actor draws from its
// own independent stream and adding actors does not perturb existing ones.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    // independent sub-stream; derivation is order-insensitive
    Rng stream(std::string_view label) const;

    void fill(std::uint8_t* out, std::size_t n);
    std::uint64_t next_u64();
    // uniform in [0, bound), bound > 0, via rejection sampling
    std::uint64_t below_u64(std::uint64_t bound);
    BigInt below(const BigInt& bound);
    BitString bits(std::size_t bit_count);

  private:
    explicit Rng(const std::array<std::uint8_t, 32>& key);

    std::array<std::uint8_t, 32> key_;
    std::array<std::uint8_t, 64> block_{};
    std::uint64_t counter_ = 0;
    std::size_t pos_ = 64;

    void refill();
};

// stable 64-bit seed derivation for spawning related-but-independent runs
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view label);

} // namespace hrng
