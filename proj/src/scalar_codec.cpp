#include "hrng/scalar_codec.hpp"

#include "hrng/error.hpp"

#include <string>

namespace hrng {

BigInt bits_to_scalar(const BitString& bits, const BigInt& p, std::size_t margin) {
    const std::size_t needed = ceil_log2(p) + margin;
    if (bits.bit_count() < needed) {
        throw Error(ErrorCode::InsufficientEntropyLength,
                    "need " + std::to_string(needed) + " bits, got " + std::to_string(bits.bit_count()));
    }
    return mod_reduce(bits.to_bigint(), p);
}

BitString scalar_to_bits(const BigInt& s, std::size_t out_len, const BigInt& p) {
    const std::size_t max_len = floor_log2(p);
    if (out_len > max_len) {
        throw Error(ErrorCode::OutputTooWide,
                    "requested " + std::to_string(out_len) + " bits, field supports " + std::to_string(max_len));
    }
    return BitString::from_bigint(s, out_len);
}

} // namespace hrng
