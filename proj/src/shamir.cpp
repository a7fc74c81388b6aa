#include "hrng/shamir.hpp"

#include "hrng/error.hpp"

#include <set>
#include <string>

namespace hrng {

BigInt poly_eval(std::span<const BigInt> coeffs, std::uint32_t x, const BigInt& p) {
    BigInt acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = mod_reduce(acc * x + coeffs[i], p);
    }
    return acc;
}

ShareSet split(const Opening& secret, std::uint32_t t, std::uint32_t k, const BigInt& p, Rng& rng) {
    if (t < 1 || t > k) {
        throw Error(ErrorCode::InvalidThreshold,
                    "threshold " + std::to_string(t) + " out of range for k=" + std::to_string(k));
    }
    if (BigInt(k) >= p) {
        throw Error(ErrorCode::FieldTooSmall,
                    "k=" + std::to_string(k) + " needs k distinct nonzero points below p=" + to_dec(p));
    }

    std::vector<BigInt> message_coeffs(t);
    std::vector<BigInt> blinding_coeffs(t);
    message_coeffs[0] = mod_reduce(secret.message, p);
    blinding_coeffs[0] = mod_reduce(secret.blinding, p);
    for (std::uint32_t j = 1; j < t; ++j) {
        message_coeffs[j] = rng.below(p);
        blinding_coeffs[j] = rng.below(p);
    }

    ShareSet set;
    set.threshold_t = t;
    set.total_k = k;
    set.shares.reserve(k);
    for (std::uint32_t i = 1; i <= k; ++i) {
        set.shares.push_back(Share{i, poly_eval(message_coeffs, i, p), poly_eval(blinding_coeffs, i, p)});
    }
    return set;
}

Opening reconstruct(std::span<const Share> shares, std::uint32_t t, const BigInt& p) {
    if (t < 1) {
        throw Error(ErrorCode::InvalidThreshold, "threshold must be at least 1");
    }
    if (shares.size() < t) {
        throw Error(ErrorCode::InsufficientShares,
                    "need " + std::to_string(t) + " shares, got " + std::to_string(shares.size()));
    }
    std::set<std::uint32_t> seen;
    for (const Share& s : shares) {
        if (s.index == 0) {
            throw Error(ErrorCode::InvalidShareIndex, "share index 0 is the secret's own point");
        }
        if (!seen.insert(s.index).second) {
            throw Error(ErrorCode::DuplicateShareIndex, "share index " + std::to_string(s.index));
        }
    }

    Opening out{0, 0};
    for (std::uint32_t i = 0; i < t; ++i) {
        BigInt num = 1;
        BigInt den = 1;
        for (std::uint32_t j = 0; j < t; ++j) {
            if (i == j) {
                continue;
            }
            num = mod_reduce(num * shares[j].index, p);
            den = mod_reduce(den * (BigInt(shares[j].index) - shares[i].index), p);
        }
        BigInt coeff = mod_reduce(num * mod_inverse(den, p), p);
        out.message = mod_reduce(out.message + coeff * shares[i].message_part, p);
        out.blinding = mod_reduce(out.blinding + coeff * shares[i].blinding_part, p);
    }
    return out;
}

} // namespace hrng
