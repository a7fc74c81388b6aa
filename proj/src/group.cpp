#include "hrng/group.hpp"

#include "hrng/error.hpp"
#include "hrng/hex.hpp"

#include <sodium.h>

#include <cstring>

namespace hrng {

namespace {

const char* kHashToGroupDomain = "hrng/pedersen/generator-h/v1";

} // namespace

std::string GroupElement::to_hex() const {
    return hrng::to_hex(data);
}

GroupElement GroupElement::from_hex(const std::string& hex) {
    return GroupElement{hrng::from_hex(hex)};
}

namespace {

// Multiplicative subgroup of order 11 inside the integers modulo 23.
class TestGroup final : public Group {
  public:
    TestGroup() {
        params_.order = 11;
        params_.g = encode(2);
        params_.h = encode(3);
        params_.description = "order-11 subgroup of Z_23^*, g=2, h=3 (test only)";
    }

    GroupElement identity() const override { return encode(1); }

    GroupElement op(const GroupElement& a, const GroupElement& b) const override {
        return encode(decode(a) * decode(b) % kModulus);
    }

    GroupElement scalar_mul(const GroupElement& base, const BigInt& scalar) const override {
        BigInt e = mod_reduce(scalar, params_.order);
        BigInt v = mod_pow(BigInt(decode(base)), e, BigInt(kModulus));
        return encode(static_cast<std::uint32_t>(v));
    }

    bool contains(const GroupElement& e) const override {
        if (e.data.size() != 1) {
            return false;
        }
        std::uint32_t v = e.data[0];
        if (v == 0 || v >= kModulus) {
            return false;
        }
        return mod_pow(BigInt(v), params_.order, BigInt(kModulus)) == 1;
    }

  private:
    static constexpr std::uint32_t kModulus = 23;

    static GroupElement encode(std::uint32_t v) {
        return GroupElement{{static_cast<std::uint8_t>(v)}};
    }

    static std::uint32_t decode(const GroupElement& e) {
        if (e.data.size() != 1 || e.data[0] == 0 || e.data[0] >= kModulus) {
            throw Error(ErrorCode::ParseError, "malformed test-group element");
        }
        return e.data[0];
    }
};

class RistrettoGroup final : public Group {
  public:
    RistrettoGroup() {
        if (sodium_init() < 0) {
            throw Error(ErrorCode::IoError, "libsodium initialization failed");
        }
        // group order of ristretto255 / the Ed25519 prime subgroup
        params_.order = BigInt("7237005577332262213973186563042994240857116359379907606001950938285454250989");

        std::uint8_t one[crypto_core_ristretto255_SCALARBYTES] = {1};
        GroupElement g;
        g.data.resize(crypto_core_ristretto255_BYTES);
        crypto_scalarmult_ristretto255_base(g.data.data(), one);
        params_.g = std::move(g);

        std::uint8_t digest[crypto_hash_sha512_BYTES];
        crypto_hash_sha512(digest, reinterpret_cast<const std::uint8_t*>(kHashToGroupDomain),
                           std::strlen(kHashToGroupDomain));
        GroupElement h;
        h.data.resize(crypto_core_ristretto255_BYTES);
        crypto_core_ristretto255_from_hash(h.data.data(), digest);
        params_.h = std::move(h);

        params_.description = "ristretto255";
    }

    GroupElement identity() const override {
        GroupElement e;
        e.data.assign(crypto_core_ristretto255_BYTES, 0);
        return e;
    }

    GroupElement op(const GroupElement& a, const GroupElement& b) const override {
        check(a);
        check(b);
        // the all-zero encoding is the identity; _add rejects it as an input
        if (is_identity(a)) {
            return b;
        }
        if (is_identity(b)) {
            return a;
        }
        GroupElement out;
        out.data.resize(crypto_core_ristretto255_BYTES);
        if (crypto_core_ristretto255_add(out.data.data(), a.data.data(), b.data.data()) != 0) {
            throw Error(ErrorCode::ParseError, "ristretto255 point addition failed");
        }
        return out;
    }

    GroupElement scalar_mul(const GroupElement& base, const BigInt& scalar) const override {
        check(base);
        BigInt e = mod_reduce(scalar, params_.order);
        // scalarmult rejects results equal to the identity, so handle the
        // two cases that produce it up front
        if (e == 0 || is_identity(base)) {
            return identity();
        }
        std::uint8_t s[crypto_core_ristretto255_SCALARBYTES] = {0};
        std::vector<std::uint8_t> be = to_bytes(e, 1);
        for (std::size_t i = 0; i < be.size(); ++i) {
            s[i] = be[be.size() - 1 - i];
        }
        GroupElement out;
        out.data.resize(crypto_core_ristretto255_BYTES);
        if (crypto_scalarmult_ristretto255(out.data.data(), s, base.data.data()) != 0) {
            throw Error(ErrorCode::ParseError, "ristretto255 scalar multiplication failed");
        }
        return out;
    }

    bool contains(const GroupElement& e) const override {
        return e.data.size() == crypto_core_ristretto255_BYTES &&
               crypto_core_ristretto255_is_valid_point(e.data.data()) == 1;
    }

  private:
    static bool is_identity(const GroupElement& e) {
        for (std::uint8_t b : e.data) {
            if (b != 0) {
                return false;
            }
        }
        return true;
    }

    void check(const GroupElement& e) const {
        if (!contains(e)) {
            throw Error(ErrorCode::ParseError, "element is not a valid ristretto255 point");
        }
    }
};

} // namespace

std::shared_ptr<const Group> make_test_group() {
    static const auto group = std::make_shared<const TestGroup>();
    return group;
}

std::shared_ptr<const Group> make_ristretto_group() {
    static const auto group = std::make_shared<const RistrettoGroup>();
    return group;
}

std::shared_ptr<const Group> make_group(const std::string& name) {
    if (name == "test11") {
        return make_test_group();
    }
    if (name == "ristretto255") {
        return make_ristretto_group();
    }
    throw Error(ErrorCode::ParseError, "unknown group: " + name);
}

} // namespace hrng
