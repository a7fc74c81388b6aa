#include "hrng/signature.hpp"
#include "hrng/hex.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <vector>

using namespace hrng;
using nlohmann::json;

namespace {

json load_fixture(const char* name) {
    std::ifstream in(std::string(HRNG_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    return json::parse(in);
}

} // namespace

TEST_CASE("published ed25519 vectors") {
    json fixture = load_fixture("ed25519_vectors.json");
    for (const json& v : fixture.at("vectors")) {
        std::vector<std::uint8_t> seed = from_hex(v.at("seed").get<std::string>());
        std::vector<std::uint8_t> expected_pub = from_hex(v.at("public").get<std::string>());
        std::vector<std::uint8_t> message = from_hex(v.at("message").get<std::string>());
        std::vector<std::uint8_t> expected_sig = from_hex(v.at("signature").get<std::string>());

        KeyPair pair = keygen_from_seed(seed);
        CHECK(std::vector<std::uint8_t>(pair.public_key.data.begin(), pair.public_key.data.end()) ==
              expected_pub);

        Signature sig = sign(pair.secret_key, message);
        CHECK(std::vector<std::uint8_t>(sig.data.begin(), sig.data.end()) == expected_sig);
        CHECK(verify_sig(pair.public_key, message, sig));
    }
}

TEST_CASE("sign then verify") {
    Rng rng(11);
    KeyPair pair = keygen(rng);
    std::vector<std::uint8_t> message{1, 2, 3, 4, 5};
    Signature sig = sign(pair.secret_key, message);
    CHECK(verify_sig(pair.public_key, message, sig));
}

TEST_CASE("tampered message fails") {
    Rng rng(12);
    KeyPair pair = keygen(rng);
    std::vector<std::uint8_t> message{1, 2, 3, 4, 5};
    Signature sig = sign(pair.secret_key, message);
    message[2] ^= 0x01;
    CHECK(!verify_sig(pair.public_key, message, sig));
}

TEST_CASE("tampered signature fails") {
    Rng rng(13);
    KeyPair pair = keygen(rng);
    std::vector<std::uint8_t> message{9, 9, 9};
    Signature sig = sign(pair.secret_key, message);
    sig.data[0] ^= 0x01;
    CHECK(!verify_sig(pair.public_key, message, sig));
}

TEST_CASE("wrong key fails") {
    Rng rng(14);
    KeyPair a = keygen(rng);
    KeyPair b = keygen(rng);
    std::vector<std::uint8_t> message{7};
    Signature sig = sign(a.secret_key, message);
    CHECK(!verify_sig(b.public_key, message, sig));
}

TEST_CASE("keygen is deterministic in the rng") {
    Rng a(42);
    Rng b(42);
    CHECK(keygen(a).public_key == keygen(b).public_key);
}
