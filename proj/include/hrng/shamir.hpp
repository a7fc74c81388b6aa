#pragma once

#include "hrng/pedersen.hpp"
#include "hrng/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hrng {

// One evaluation of the sharing polynomials at x = index. The same index is
// used for both components so a share travels as one unit.
struct Share {
    std::uint32_t index = 0; // evaluation point, >= 1
    BigInt message_part;
    BigInt blinding_part;

    bool operator==(const Share& other) const = default;
};

struct ShareSet {
    std::vector<Share> shares; // length total_k, indices 1..total_k
    std::uint32_t threshold_t = 0;
    std::uint32_t total_k = 0;
};

// Evaluate sum_j coeffs[j] * x^j over GF(p); coeffs[0] is the secret.
BigInt poly_eval(std::span<const BigInt> coeffs, std::uint32_t x, const BigInt& p);

// Shamir sharing over GF(p), applied component-wise to (message, blinding):
// degree t-1 polynomials with the secret component as constant term,
// evaluated at x = 1..k. Requires 1 <= t <= k < p.
ShareSet split(const Opening& secret, std::uint32_t t, std::uint32_t k, const BigInt& p, Rng& rng);

// Lagrange interpolation at x = 0 over the first t of the given shares.
// Requires at least t shares with distinct nonzero indices.
Opening reconstruct(std::span<const Share> shares, std::uint32_t t, const BigInt& p);

} // namespace hrng
