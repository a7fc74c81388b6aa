#pragma once

#include "hrng/bigint.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hrng {

// Canonical encoding of a group element; equal elements encode identically.
struct GroupElement {
    std::vector<std::uint8_t> data;

    bool operator==(const GroupElement& other) const = default;

    std::string to_hex() const;
    static GroupElement from_hex(const std::string& hex);
};

struct GroupParams {
    BigInt order;    // prime p, the order of g and h
    GroupElement g;
    GroupElement h;
    std::string description;
};

// Prime-order group written additively: op is the group operation and
// scalar_mul the repeated operation, so a Pedersen commitment is
// scalar_mul(g, m) op scalar_mul(h, r) regardless of the backend.
class Group {
  public:
    virtual ~Group() = default;

    const GroupParams& params() const { return params_; }
    const BigInt& order() const { return params_.order; }
    const GroupElement& g() const { return params_.g; }
    const GroupElement& h() const { return params_.h; }

    virtual GroupElement identity() const = 0;
    virtual GroupElement op(const GroupElement& a, const GroupElement& b) const = 0;
    virtual GroupElement scalar_mul(const GroupElement& base, const BigInt& scalar) const = 0;
    virtual bool contains(const GroupElement& e) const = 0;

  protected:
    GroupParams params_;
};

// Order-11 subgroup of the integers modulo 23 with g=2, h=3. Small enough to
// enumerate every scalar pair, which is what the exhaustive suites need.
// Discrete logs are trivial here, so it proves nothing about hiding beyond
// the combinatorial properties the tests check.
std::shared_ptr<const Group> make_test_group();

// ristretto255: prime-order group at the 128-bit security level. h is
// derived by hashing a fixed domain-separation string to the group, so no
// party knows its discrete log relative to g.
std::shared_ptr<const Group> make_ristretto_group();

// by config name: "test11" or "ristretto255"
std::shared_ptr<const Group> make_group(const std::string& name);

} // namespace hrng
