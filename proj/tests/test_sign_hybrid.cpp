// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybridseal/sign_hybrid.hpp"
#include "test_support.hpp"

using namespace hybridseal;

TEST_CASE("sign/verify roundtrip over 500 random keypairs and messages") {
    std::mt19937_64 rng(301);
    for (int i = 0; i < 500; ++i) {
        HybridSigKeyPair kp = generate_signing_keypair();
        const Bytes msg = testsupport::seeded_bytes(rng, rng() % 200);
        HybridSignature sig = sign(kp, msg);
        REQUIRE(verify(kp.public_key(), msg, sig));
    }
}

TEST_CASE("keypair and signature carry the documented shapes") {
    HybridSigKeyPair kp = generate_signing_keypair();
    CHECK(kp.alg == "Ed25519+ML-DSA-65");
    CHECK(kp.cls_pub.size() == 32);
    CHECK(kp.pqc_pub.size() == 1952);

    const Bytes msg = random_bytes(32);
    HybridSignature sig = sign(kp, msg);
    CHECK(sig.cls_sig.size() == 64);
    CHECK(sig.pqc_sig.size() == 3309);
    CHECK(sig.version == 1);

    CHECK_THROWS_AS((void)generate_signing_keypair("X25519+ML-KEM-768"), Error);
}

TEST_CASE("hedged signing: repeated signatures differ but both verify") {
    HybridSigKeyPair kp = generate_signing_keypair();
    const Bytes msg = random_bytes(32);
    HybridSignature first = sign(kp, msg);
    HybridSignature second = sign(kp, msg);
    CHECK(first.pqc_sig != second.pqc_sig);
    CHECK(verify(kp.public_key(), msg, first));
    CHECK(verify(kp.public_key(), msg, second));
}

TEST_CASE("empty messages sign and verify") {
    HybridSigKeyPair kp = generate_signing_keypair();
    HybridSignature sig = sign(kp, {});
    CHECK(verify(kp.public_key(), {}, sig));
}

TEST_CASE("strict-AND: corrupting either component fails verification") {
    std::mt19937_64 rng(302);
    HybridSigKeyPair kp = generate_signing_keypair();
    for (int i = 0; i < 50; ++i) {
        const Bytes msg = testsupport::seeded_bytes(rng, 64);
        HybridSignature sig = sign(kp, msg);

        HybridSignature cls_bad = sig;
        cls_bad.cls_sig[rng() % cls_bad.cls_sig.size()] ^=
            static_cast<std::uint8_t>(1 << (rng() % 8));
        REQUIRE_FALSE(verify(kp.public_key(), msg, cls_bad));

        HybridSignature pqc_bad = sig;
        pqc_bad.pqc_sig[rng() % pqc_bad.pqc_sig.size()] ^=
            static_cast<std::uint8_t>(1 << (rng() % 8));
        REQUIRE_FALSE(verify(kp.public_key(), msg, pqc_bad));
    }
}

TEST_CASE("signatures do not verify under a different keypair") {
    HybridSigKeyPair kp = generate_signing_keypair();
    HybridSigKeyPair other = generate_signing_keypair();
    const Bytes msg = random_bytes(48);
    HybridSignature sig = sign(kp, msg);
    CHECK_FALSE(verify(other.public_key(), msg, sig));
}

TEST_CASE("wrong message fails verification") {
    HybridSigKeyPair kp = generate_signing_keypair();
    const Bytes msg = random_bytes(48);
    HybridSignature sig = sign(kp, msg);
    Bytes altered = msg;
    altered[5] ^= 0x01;
    CHECK_FALSE(verify(kp.public_key(), altered, sig));
}

TEST_CASE("length mismatches raise malformed_signature, distinct from false") {
    HybridSigKeyPair kp = generate_signing_keypair();
    const Bytes msg = random_bytes(32);
    HybridSignature sig = sign(kp, msg);

    HybridSignature short_cls = sig;
    short_cls.cls_sig.resize(63);
    CHECK_THROWS_AS((void)verify(kp.public_key(), msg, short_cls), Error);
    try {
        (void)verify(kp.public_key(), msg, short_cls);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_signature);
    }

    HybridSignature long_pqc = sig;
    long_pqc.pqc_sig.push_back(0);
    CHECK_THROWS_AS((void)verify(kp.public_key(), msg, long_pqc), Error);
}

TEST_CASE("algorithm mismatch between key and signature verifies false") {
    HybridSigKeyPair kp = generate_signing_keypair();
    const Bytes msg = random_bytes(32);
    HybridSignature sig = sign(kp, msg);
    sig.alg = "X25519+ML-KEM-768";
    CHECK_FALSE(verify(kp.public_key(), msg, sig));
}
