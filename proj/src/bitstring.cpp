#include "hrng/bitstring.hpp"

#include "hrng/error.hpp"

namespace hrng {

namespace {

std::size_t byte_len(std::size_t bit_count) {
    return (bit_count + 7) / 8;
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    return -1;
}

} // namespace

BitString::BitString(std::vector<std::uint8_t> bytes, std::size_t bit_count)
    : bytes_(std::move(bytes)), bit_count_(bit_count) {
    if (bytes_.size() != byte_len(bit_count)) {
        throw Error(ErrorCode::ParseError, "bit string byte length does not match bit count");
    }
    mask_top();
}

void BitString::mask_top() {
    if (bit_count_ % 8 != 0 && !bytes_.empty()) {
        bytes_[0] &= static_cast<std::uint8_t>(0xff >> (8 - bit_count_ % 8));
    }
}

BitString BitString::zeros(std::size_t bit_count) {
    return BitString(std::vector<std::uint8_t>(byte_len(bit_count), 0), bit_count);
}

BitString BitString::from_uint(std::uint64_t v, std::size_t bit_count) {
    return from_bigint(BigInt(v), bit_count);
}

BitString BitString::from_bigint(const BigInt& v, std::size_t bit_count) {
    if (v < 0) {
        throw Error(ErrorCode::ParseError, "bit string from negative value");
    }
    std::size_t len = byte_len(bit_count);
    BigInt masked = bit_count == 0 ? BigInt(0) : v & ((BigInt(1) << bit_count) - 1);
    std::vector<std::uint8_t> raw = to_bytes(masked, len == 0 ? 1 : len);
    if (bit_count == 0) {
        return BitString({}, 0);
    }
    if (raw.size() > len) {
        raw.erase(raw.begin(), raw.begin() + (raw.size() - len));
    }
    return BitString(std::move(raw), bit_count);
}

BitString BitString::from_hex(const std::string& hex, std::size_t bit_count) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::ParseError, "hex string with odd length");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::ParseError, "bad hex digit in bit string");
        }
        bytes.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    if (bit_count % 8 != 0 && !bytes.empty() &&
        (bytes[0] & ~(0xff >> (8 - bit_count % 8))) != 0) {
        throw Error(ErrorCode::ParseError, "bit string has nonzero padding bits");
    }
    return BitString(std::move(bytes), bit_count);
}

BigInt BitString::to_bigint() const {
    return bytes_.empty() ? BigInt(0) : from_bytes(bytes_.data(), bytes_.size());
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

BitString BitString::xor_with(const BitString& other) const {
    if (other.bit_count_ != bit_count_) {
        throw Error(ErrorCode::ParseError, "xor of bit strings with different widths");
    }
    std::vector<std::uint8_t> out(bytes_.size());
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
        out[i] = bytes_[i] ^ other.bytes_[i];
    }
    return BitString(std::move(out), bit_count_);
}

BitString BitString::truncate(std::size_t bit_count) const {
    if (bit_count >= bit_count_) {
        return *this;
    }
    return from_bigint(to_bigint(), bit_count);
}

bool BitString::bit(std::size_t index_from_lsb) const {
    if (index_from_lsb >= bit_count_) {
        return false;
    }
    std::size_t byte_index = bytes_.size() - 1 - index_from_lsb / 8;
    return (bytes_[byte_index] >> (index_from_lsb % 8)) & 1;
}

} // namespace hrng
