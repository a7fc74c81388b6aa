#pragma once

#include "hrng/bigint.hpp"
#include "hrng/bitstring.hpp"

#include <cstddef>

namespace hrng {

// Extra input bits required beyond ceil(log2 p) before a modular reduction is
// accepted; keeps the bias of the reduced value below 2^-margin.
inline constexpr std::size_t kDefaultScalarMargin = 64;

// Interprets bits as a big-endian integer and reduces it mod p.  The input
// must carry at least ceil(log2 p) + margin bits.
BigInt bits_to_scalar(const BitString& bits, const BigInt& p, std::size_t margin = kDefaultScalarMargin);

// Returns the out_len least-significant bits of s.  out_len may not exceed
// floor(log2 p): wider outputs would not be uniformly covered by [0, p).
BitString scalar_to_bits(const BigInt& s, std::size_t out_len, const BigInt& p);

} // namespace hrng
