#pragma once

#include "hrng/group.hpp"

#include <span>

namespace hrng {

// (message, blinding) exponent pair; components live in [0, p)
struct Opening {
    BigInt message;
    BigInt blinding;

    bool operator==(const Opening& other) const = default;
};

struct Commitment {
    GroupElement element;

    bool operator==(const Commitment& other) const = default;
};

// c = g^m * h^r. Exponents are reduced mod the group order, so raw integers
// commit identically to their reductions.
Commitment commit(const Group& group, const Opening& opening);

// true iff commit(opening) equals c
bool open_verify(const Group& group, const Commitment& c, const Opening& opening);

// Group product of all commitments; commits to the component-wise sum of the
// openings mod p. Throws EmptyAggregation on an empty list.
Commitment hom_combine(const Group& group, std::span<const Commitment> commitments);

} // namespace hrng
