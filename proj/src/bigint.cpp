#include "hrng/bigint.hpp"

#include "hrng/error.hpp"

#include <algorithm>

namespace hrng {

std::size_t ceil_log2(const BigInt& v) {
    if (v <= 1) {
        return 0;
    }
    BigInt x = v - 1;
    std::size_t bits = 0;
    while (x > 0) {
        x >>= 1;
        ++bits;
    }
    return bits;
}

std::size_t floor_log2(const BigInt& v) {
    if (v < 1) {
        throw Error(ErrorCode::ParseError, "floor_log2 of non-positive value");
    }
    BigInt x = v;
    std::size_t bits = 0;
    while (x > 1) {
        x >>= 1;
        ++bits;
    }
    return bits;
}

std::string to_dec(const BigInt& v) {
    return v.str();
}

BigInt from_dec(const std::string& s) {
    if (s.empty()) {
        throw Error(ErrorCode::ParseError, "empty integer string");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '-' && i == 0 && s.size() > 1) {
            continue;
        }
        if (s[i] < '0' || s[i] > '9') {
            throw Error(ErrorCode::ParseError, "bad integer string: " + s);
        }
    }
    return BigInt(s);
}

std::vector<std::uint8_t> to_bytes(const BigInt& v, std::size_t min_len) {
    std::vector<std::uint8_t> out;
    BigInt x = v;
    while (x > 0) {
        out.push_back(static_cast<std::uint8_t>(x & 0xff));
        x >>= 8;
    }
    while (out.size() < std::max<std::size_t>(min_len, 1)) {
        out.push_back(0);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

BigInt from_bytes(const std::uint8_t* data, std::size_t len) {
    BigInt v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        v <<= 8;
        v += data[i];
    }
    return v;
}

} // namespace hrng
