#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hrng {

using BigInt = boost::multiprecision::cpp_int;

// a mod m, result always in [0, m)
inline BigInt mod_reduce(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) {
        r += m;
    }
    return r;
}

inline BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& m) {
    BigInt b = mod_reduce(base, m);
    return boost::multiprecision::powm(b, exp, m);
}

// inverse via Fermat; m must be prime
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    return mod_pow(a, m - 2, m);
}

// smallest n with 2^n >= v (so an n-bit string can hold any value < 2^n >= v)
std::size_t ceil_log2(const BigInt& v);
// largest n with 2^n <= v
std::size_t floor_log2(const BigInt& v);

std::string to_dec(const BigInt& v);
BigInt from_dec(const std::string& s);

// big-endian byte codec; to_bytes pads to at least min_len bytes
std::vector<std::uint8_t> to_bytes(const BigInt& v, std::size_t min_len = 1);
BigInt from_bytes(const std::uint8_t* data, std::size_t len);

} // namespace hrng
