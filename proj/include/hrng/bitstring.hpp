#pragma once

#include "hrng/bigint.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hrng {

// Fixed-width bit string, big-endian byte layout. bit_count need not be a
// multiple of 8; unused high bits of the first byte are kept zero so equal
// strings compare equal bytewise.
class BitString {
  public:
    BitString() = default;
    BitString(std::vector<std::uint8_t> bytes, std::size_t bit_count);

    static BitString zeros(std::size_t bit_count);
    // low bit_count bits of v, big-endian
    static BitString from_uint(std::uint64_t v, std::size_t bit_count);
    static BitString from_bigint(const BigInt& v, std::size_t bit_count);
    static BitString from_hex(const std::string& hex, std::size_t bit_count);

    std::size_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    bool empty() const { return bit_count_ == 0; }

    BigInt to_bigint() const;
    std::string to_hex() const;

    // bitwise xor; widths must match
    BitString xor_with(const BitString& other) const;
    // keep the low bit_count bits
    BitString truncate(std::size_t bit_count) const;
    bool bit(std::size_t index_from_lsb) const;

    bool operator==(const BitString& other) const = default;

  private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_count_ = 0;

    void mask_top();
};

} // namespace hrng
