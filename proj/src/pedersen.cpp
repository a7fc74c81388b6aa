#include "hrng/pedersen.hpp"

#include "hrng/error.hpp"

namespace hrng {

Commitment commit(const Group& group, const Opening& opening) {
    GroupElement gm = group.scalar_mul(group.g(), opening.message);
    GroupElement hr = group.scalar_mul(group.h(), opening.blinding);
    return Commitment{group.op(gm, hr)};
}

bool open_verify(const Group& group, const Commitment& c, const Opening& opening) {
    return commit(group, opening) == c;
}

Commitment hom_combine(const Group& group, std::span<const Commitment> commitments) {
    if (commitments.empty()) {
        throw Error(ErrorCode::EmptyAggregation, "no commitments to combine");
    }
    GroupElement acc = commitments[0].element;
    for (std::size_t i = 1; i < commitments.size(); ++i) {
        acc = group.op(acc, commitments[i].element);
    }
    return Commitment{acc};
}

} // namespace hrng
